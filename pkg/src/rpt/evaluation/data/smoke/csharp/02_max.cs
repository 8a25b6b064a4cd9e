public class ArrayMax
{
    public static int Max(int[] values)
    {
        int best = values[0];
        foreach (int v in values)
        {
            if (v > best)
            {
                best = v;
            }
        }
        return best;
    }
}
