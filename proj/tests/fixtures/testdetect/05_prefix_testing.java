package fx;

public class Testing {
    void testHelper() {
        run();
    }
}
