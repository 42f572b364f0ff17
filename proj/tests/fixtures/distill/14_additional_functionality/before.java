package p;

public class Calc {
    void run() {
        work();
    }
}
