import java.util.HashMap;
import java.util.Map;

public class WordCount {
    public static Map<String, Integer> count(String[] words) {
        Map<String, Integer> counts = new HashMap<String, Integer>();
        for (String word : words) {
            if (counts.containsKey(word)) {
                counts.put(word, counts.get(word) + 1);
            } else {
                counts.put(word, 1);
            }
        }
        return counts;
    }
}
