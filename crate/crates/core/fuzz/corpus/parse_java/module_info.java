module foo.bar { requires java.base; }
