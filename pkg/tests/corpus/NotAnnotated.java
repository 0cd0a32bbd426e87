public class NotAnnotated {
  public int shared = 0;

  public void bump() {
    shared = shared + 1;
  }
}
