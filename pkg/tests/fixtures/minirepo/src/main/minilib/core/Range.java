package minilib.core;

public class Range {
    private int low;
    private int high;
    private boolean capped;

    public Range(int low, int high) {
        if (low > high) {
            throw new IllegalArgumentException("low above high");
        }
        this.low = low;
        this.high = high;
        this.capped = false;
    }

    public Range(int high) {
        this(0, high);
        this.capped = true;
    }

    public boolean contains(int value) {
        return value >= low && value <= high;
    }

    public int clamp(int value) {
        if (value < low) {
            return low;
        }
        if (value > high) {
            return high;
        }
        return value;
    }

    public boolean isCapped() {
        return capped;
    }

    public int span() {
        return high - low;
    }
}
