import javax.annotation.concurrent.ThreadSafe;

@ThreadSafe
public class SyncBlocks {
  private final Object mu = new Object();
  private long total = 0;

  public void bump() {
    synchronized (mu) {
      total = total + 1;
    }
  }

  public long snapshot() {
    synchronized (this.mu) {
      long copy = total;
      return copy;
    }
  }
}
