using System;

public class IntStack
{
    private int[] items = new int[16];
    private int size = 0;

    public void Push(int value)
    {
        if (size == items.Length)
        {
            int[] bigger = new int[items.Length * 2];
            for (int i = 0; i < size; i++)
            {
                bigger[i] = items[i];
            }
            items = bigger;
        }
        items[size] = value;
        size++;
    }

    public int Pop()
    {
        if (size == 0)
        {
            throw new InvalidOperationException("stack is empty");
        }
        size--;
        return items[size];
    }
}
