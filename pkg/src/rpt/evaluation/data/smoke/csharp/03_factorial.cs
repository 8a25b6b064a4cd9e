public class Factorial
{
    public static long Compute(int n)
    {
        if (n <= 1)
        {
            return 1;
        }
        return n * Compute(n - 1);
    }
}
