package minilib.core;

public class Lines {
    private Buffer buffer;

    public Lines() {
        this.buffer = new Buffer();
    }

    public static class Buffer {
        private StringBuilder data;
        private int writes = 0;

        public Buffer() {
            this.data = new StringBuilder();
        }

        public void add(String text) {
            data.append(text);
            writes = writes + 1;
        }

        public void add(char mark) {
            data.append(mark);
            writes = writes + 1;
        }

        public String render() {
            return data.toString();
        }

        public int getWrites() {
            return writes;
        }
    }

    public void push(String text) {
        buffer.add(text);
    }

    public void mark(char c) {
        buffer.add(c);
    }

    public String render() {
        return buffer.render();
    }
}
