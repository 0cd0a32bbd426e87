import com.example.locks.MyLock;
import javax.annotation.concurrent.ThreadSafe;

@ThreadSafe
public class CustomLocked {
  private int total = 0;
  private final MyLock guard = new MyLock();

  public void add(int amount) {
    guard.lock();
    total = total + amount;
    guard.unlock();
  }

  public int current() {
    guard.lock();
    int snapshot = total;
    guard.unlock();
    return snapshot;
  }
}
