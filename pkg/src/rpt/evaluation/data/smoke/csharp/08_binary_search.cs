public class Search
{
    public static int BinarySearch(int[] sorted, int key)
    {
        int low = 0;
        int high = sorted.Length - 1;
        while (low <= high)
        {
            int mid = (low + high) / 2;
            if (sorted[mid] == key)
            {
                return mid;
            }
            else if (sorted[mid] < key)
            {
                low = mid + 1;
            }
            else
            {
                high = mid - 1;
            }
        }
        return -1;
    }
}
