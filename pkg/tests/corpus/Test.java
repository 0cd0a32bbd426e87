import java.util.concurrent.locks.Lock;
import java.util.concurrent.locks.ReentrantLock;
import javax.annotation.concurrent.ThreadSafe;

@ThreadSafe
public class Test {
  private int y;
  private Lock lock = new ReentrantLock();

  private void setYPrivate(int y) {
    this.y = y;
  }

  public void setY(int y) {
    lock.lock();
    setYPrivate(y);
    lock.unlock();
  }
}
