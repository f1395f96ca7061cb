package store;

public interface Auditable extends Repository {
    java.util.List<String> history();
}
