package minilib.core;

public class Option {
    private String key;
    private String fallback;
    private int uses = 0;

    public Option(String key, String fallback) {
        this.key = key;
        this.fallback = fallback;
    }

    public Option(String key) {
        this(key, "none");
    }

    public String getKey() {
        return key;
    }

    public String resolve(String value) {
        uses = uses + 1;
        if (value == null || value.isEmpty()) {
            return fallback;
        }
        return value;
    }

    public int getUses() {
        return uses;
    }

    public boolean hasFallback() {
        return !fallback.isEmpty();
    }
}
