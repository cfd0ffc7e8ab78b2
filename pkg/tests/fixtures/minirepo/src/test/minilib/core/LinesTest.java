package minilib.core;

import org.junit.Test;
import static org.junit.Assert.*;

public class LinesTest {
    @Test
    public void rendersPushedText() {
        Lines lines = new Lines();
        lines.push("ab");
        lines.mark('!');
        assertEquals("ab!", lines.render());
    }

    @Test
    public void bufferCountsWrites() {
        Lines.Buffer buffer = new Lines.Buffer();
        buffer.add("x");
        buffer.add('y');
        assertEquals(2, buffer.getWrites());
        assertEquals("xy", buffer.render());
    }
}
