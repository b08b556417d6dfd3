package pa;

public enum Color {
    RED,
    GREEN;

    Color next() {
        return RED;
    }
}
