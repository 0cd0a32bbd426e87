import com.example.concurrent.AtomicRegistry;
import javax.annotation.concurrent.ThreadSafe;

@ThreadSafe
public class RegistryHolder {
  private final AtomicRegistry registry = new AtomicRegistry();

  public void record(String key) {
    registry.put(key);
  }

  public void drop(String key) {
    registry.remove(key);
  }
}
