import java.util.concurrent.locks.ReentrantLock;
import javax.annotation.concurrent.ThreadSafe;

@ThreadSafe
public class TryFinally {
  private int value = 0;
  private final ReentrantLock lock = new ReentrantLock();

  public int swap(int next) {
    lock.lock();
    try {
      int old = value;
      value = next;
      return old;
    } finally {
      lock.unlock();
    }
  }
}
