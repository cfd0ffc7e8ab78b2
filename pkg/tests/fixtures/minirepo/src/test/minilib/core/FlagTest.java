package minilib.core;

import org.junit.Test;
import static org.junit.Assert.*;

public class FlagTest {
    @Test
    public void buildsWithDefaultLetter() {
        Flag flag = new Flag("verbose");
        assertEquals("verbose", flag.getName());
        assertEquals('-', flag.getLetter());
    }

    @Test
    public void buildsWithExplicitLetter() {
        Flag flag = new Flag("quiet", 'q');
        assertEquals('q', flag.getLetter());
    }

    @Test
    public void enableTogglesState() {
        Flag flag = new Flag("debug");
        flag.enable();
        assertTrue(flag.isEnabled());
    }
}
