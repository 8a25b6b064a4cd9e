public class Vowels
{
    public static int CountVowels(string text)
    {
        int count = 0;
        string vowels = "aeiouAEIOU";
        for (int i = 0; i < text.Length; i++)
        {
            if (vowels.IndexOf(text[i]) >= 0)
            {
                count++;
            }
        }
        return count;
    }
}
