public class Matrix
{
    public static int[][] Transpose(int[][] m)
    {
        int rows = m.Length;
        int cols = m[0].Length;
        int[][] result = new int[cols][];
        for (int c = 0; c < cols; c++)
        {
            result[c] = new int[rows];
        }
        for (int r = 0; r < rows; r++)
        {
            for (int c = 0; c < cols; c++)
            {
                result[c][r] = m[r][c];
            }
        }
        return result;
    }
}
