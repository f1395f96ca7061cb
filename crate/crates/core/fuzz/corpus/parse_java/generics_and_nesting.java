package a.b;

import java.util.*;
import static java.lang.Math.max;

@FunctionalInterface
public interface Outer<T extends Comparable<? super T>> extends Iterable<T> {
    <R> Map<String, List<? extends R>> collect(final T @Nullable [] items, int... rest) throws java.io.IOException;
    default T first() { return iterator().next(); }
    static <T> Outer<T> empty() { return null; }

    interface Inner extends Outer<String> {
        String text(/* comment */ char c, String s);
    }

    enum Mode { A, B { void x() {} }; abstract void y(); }

    record Point(int x, int y) implements Inner {
        public String text(char c, String s) { return "}" + '{' + """
            }
            """; }
    }
}
