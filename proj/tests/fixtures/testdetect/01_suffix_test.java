package fx;

public class ParserTest {
    @Test
    public void parsesEmpty() {
        check();
    }
}
