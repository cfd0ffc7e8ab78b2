package minilib.core;

import org.junit.Test;
import static org.junit.Assert.*;

public class RangeTest {
    @Test
    public void clampKeepsValuesInsideBounds() {
        Range range = new Range(2, 8);
        assertEquals(5, range.clamp(5));
        assertEquals(2, range.clamp(1));
    }

    @Test
    public void cappedConstructorMarksRange() {
        Range range = new Range(9);
        assertTrue(range.isCapped());
        assertTrue(range.contains(0));
    }

    @Test
    public void rejectsInvertedBounds() {
        try {
            new Range(5, 1);
            fail("expected rejection");
        } catch (IllegalArgumentException e) {
            assertTrue(true);
        }
    }
}
