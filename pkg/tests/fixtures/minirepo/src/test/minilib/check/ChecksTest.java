package minilib.check;

import minilib.core.Range;
import org.junit.Test;
import static org.junit.Assert.*;

public class ChecksTest {
    @Test
    public void acceptsWithinRange() {
        Range bounds = new Range(2, 4);
        LengthCheck check = new LengthCheck(bounds);
        assertTrue(check.accept("abc"));
        assertFalse(check.accept("a"));
    }

    @Test
    public void rejectsCountsApplications() {
        Range bounds = new Range(2, 4);
        LengthCheck check = new LengthCheck(bounds);
        assertTrue(check.rejects("toolong"));
        assertEquals(1, check.getApplied());
        assertEquals("length", check.label());
    }
}
