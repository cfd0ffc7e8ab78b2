package minilib.core;

public class Flag {
    private String name;
    private char letter;
    private boolean enabled = false;

    public Flag(String name) {
        this.name = name;
        this.letter = '-';
    }

    public Flag(String name, char letter) {
        this.name = name;
        this.letter = letter;
    }

    public String getName() {
        return name;
    }

    public char getLetter() {
        return letter;
    }

    public void enable() {
        enabled = true;
    }

    public boolean isEnabled() {
        return enabled;
    }

    public String describe() {
        return name + "(" + letter + ")";
    }
}
