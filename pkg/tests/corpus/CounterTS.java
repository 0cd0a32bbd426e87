import java.util.concurrent.locks.Lock;
import java.util.concurrent.locks.ReentrantLock;
import javax.annotation.concurrent.ThreadSafe;

@ThreadSafe
class CounterTS {
  private int cnt = 0;
  private final Lock l = new ReentrantLock();

  public void inc() {
    l.lock();
    int temp = cnt;
    temp += 1;
    cnt = temp;
    l.unlock();
  }
}
