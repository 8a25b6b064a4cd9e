public class Power
{
    public static long Compute(long baseValue, int exponent)
    {
        long result = 1;
        while (exponent > 0)
        {
            if (exponent % 2 == 1)
            {
                result = result * baseValue;
            }
            baseValue = baseValue * baseValue;
            exponent = exponent / 2;
        }
        return result;
    }
}
