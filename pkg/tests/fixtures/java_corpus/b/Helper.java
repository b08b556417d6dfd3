package pb;

public class Helper {
    public void assist() {
    }
}
