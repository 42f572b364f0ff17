package p;

public class Calc {
    void run(int a) {
        use(a);
    }
}
