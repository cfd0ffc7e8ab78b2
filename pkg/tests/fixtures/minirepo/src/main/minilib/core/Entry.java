package minilib.core;

public class Entry {
    private Registry owner;
    private String name;
    private Entry prev;

    public Entry(Registry owner, String name, Entry prev) {
        this.owner = owner;
        this.name = name;
        this.prev = prev;
    }

    public String qualifiedName() {
        return owner.getPrefix() + "." + name;
    }

    public int depth() {
        return 1 + owner.chainLength(prev);
    }

    public String getName() {
        return name;
    }

    public Registry getOwner() {
        return owner;
    }
}
