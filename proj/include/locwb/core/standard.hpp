#pragma once

#include <string>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/poset.hpp"

namespace locwb::standard {

  // One object, identity only.
  inline CategoryRef point(std::string const& object = "0",
                           std::string const& name = "Pt") {
    CategoryBuilder b(name);
    b.add_object(object);
    return b.build_ref();
  }

  // 0 -f-> 1.
  inline CategoryRef arrow() {
    CategoryBuilder b("Arrow");
    b.add_object("0");
    b.add_object("1");
    b.add_morphism("f", "0", "1");
    return b.build_ref();
  }

  // Two parallel arrows f, g: a -> b.
  inline CategoryRef par() {
    CategoryBuilder b("Par");
    b.add_object("a");
    b.add_object("b");
    b.add_morphism("f", "a", "b");
    b.add_morphism("g", "a", "b");
    return b.build_ref();
  }

  // b <-p- a -q-> c.
  inline CategoryRef span() {
    CategoryBuilder b("Span");
    b.add_object("a");
    b.add_object("b");
    b.add_object("c");
    b.add_morphism("p", "a", "b");
    b.add_morphism("q", "a", "c");
    return b.build_ref();
  }

  // b -p-> a <-q- c: the opposite of span().
  inline CategoryRef cospan() {
    CategoryBuilder b("Cospan");
    b.add_object("a");
    b.add_object("b");
    b.add_object("c");
    b.add_morphism("p", "b", "a");
    b.add_morphism("q", "c", "a");
    return b.build_ref();
  }

  // Indiscrete category on n objects: exactly one arrow between any two.
  inline CategoryRef indiscrete(int n) {
    CategoryBuilder    b("Ind" + std::to_string(n));
    std::vector<MorId> arrow(n * n, kNone);
    for (int i = 0; i < n; ++i) {
      b.add_object(std::to_string(i));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        arrow[i * n + j] =
            i == j ? b.identity(i)
                   : b.add_morphism("u" + std::to_string(i) + std::to_string(j),
                                    i, j);
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          if (i != j && j != k) {
            b.set_composite(arrow[j * n + k], arrow[i * n + j],
                            arrow[i * n + k]);
          }
        }
      }
    }
    return b.build_ref();
  }

  inline CategoryRef from_poset(FinPoset const& E) {
    return std::make_shared<FinCategory const>(poset_category(E));
  }

  // 0 -> 1 -> ... -> n.
  inline CategoryRef chain(int n) {
    return from_poset(FinPoset::chain(n));
  }

  // The lattice {0,1}^2 ordered componentwise.
  inline CategoryRef square_lattice() {
    FinPoset E("Lattice", {"00", "01", "10", "11"},
               {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    return from_poset(E);
  }

  // Two isolated objects.
  inline CategoryRef two_points() {
    CategoryBuilder b("PtPt");
    b.add_object("x");
    b.add_object("y");
    return b.build_ref();
  }

}  // namespace locwb::standard
