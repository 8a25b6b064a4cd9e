public class Statistics
{
    public static double Average(double[] samples)
    {
        if (samples.Length == 0)
        {
            return 0.0;
        }
        double sum = 0.0;
        foreach (double s in samples)
        {
            sum += s;
        }
        return sum / samples.Length;
    }
}
