package p;

import org.junit.Test;

public class CalcTest {
    @Test
    public void testAdd() {
        assertEquals(3, new Calc().add(1, 2));
    }

    @Test
    public void subtractsNegative() {
        assertEquals(3, new Calc().sub(1, -2));
    }
}
