import java.util.concurrent.ConcurrentHashMap;
import javax.annotation.concurrent.ThreadSafe;

@ThreadSafe
public class Mixed {
  private final ConcurrentHashMap cache = new ConcurrentHashMap();
  private volatile boolean ready = false;
  private int hits = 0;

  public synchronized void hit() {
    hits = hits + 1;
  }

  public synchronized int hitCount() {
    return hits;
  }

  public void markReady() {
    ready = true;
  }

  public void store(String key, String value) {
    cache.put(key, value);
  }
}
