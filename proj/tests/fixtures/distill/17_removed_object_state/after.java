package p;

public class Calc {
    private int total;
}
