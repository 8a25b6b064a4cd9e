using System.Collections.Generic;

public class WordCount
{
    public static Dictionary<string, int> Count(string[] words)
    {
        Dictionary<string, int> counts = new Dictionary<string, int>();
        foreach (string word in words)
        {
            if (counts.ContainsKey(word))
            {
                counts[word] = counts[word] + 1;
            }
            else
            {
                counts[word] = 1;
            }
        }
        return counts;
    }
}
