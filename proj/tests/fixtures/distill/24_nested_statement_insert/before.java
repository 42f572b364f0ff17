package p;

public class Calc {
    void run(int x) {
        if (x > 0) {
            a = 1;
        }
    }
}
