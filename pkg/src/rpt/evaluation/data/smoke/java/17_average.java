public class Statistics {
    public static double average(double[] samples) {
        if (samples.length == 0) {
            return 0.0;
        }
        double sum = 0.0;
        for (double s : samples) {
            sum += s;
        }
        return sum / samples.length;
    }
}
