package minilib.check;

public abstract class BaseCheck implements Check {
    private int applied = 0;

    public abstract boolean accept(String value);

    public String label() {
        return "check";
    }

    public boolean rejects(String value) {
        applied = applied + 1;
        return !accept(value);
    }

    public int getApplied() {
        return applied;
    }
}
