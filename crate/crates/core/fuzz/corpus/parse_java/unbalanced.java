package p;
class C {
  void m() {
