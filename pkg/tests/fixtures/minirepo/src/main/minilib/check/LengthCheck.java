package minilib.check;

import minilib.core.Range;

public class LengthCheck extends BaseCheck {
    private Range range;

    public LengthCheck(Range range) {
        this.range = range;
    }

    public boolean accept(String value) {
        if (value == null) {
            return false;
        }
        return range.contains(value.length());
    }

    public String label() {
        return "length";
    }
}
