package p;

public class Calc {
    void run() {
        a = 1;
    }
}
