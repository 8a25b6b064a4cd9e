public class Node
{
    public int Value;
    public Node Next;

    public Node(int value)
    {
        this.Value = value;
        this.Next = null;
    }

    public static int Length(Node head)
    {
        int count = 0;
        Node current = head;
        while (current != null)
        {
            count++;
            current = current.Next;
        }
        return count;
    }
}
