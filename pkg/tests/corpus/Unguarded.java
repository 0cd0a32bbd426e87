import javax.annotation.concurrent.ThreadSafe;

@ThreadSafe
public class Unguarded {
  private int counter = 0;

  public int next() {
    counter = counter + 1;
    return counter;
  }

  public int peek() {
    return counter;
  }
}
