package p;

public class Calc {
    public void run() {
        work();
    }
}
