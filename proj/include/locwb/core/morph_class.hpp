#pragma once

#include <string>
#include <utility>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/validation.hpp"

namespace locwb {

  // A marked class of morphisms of a finite category.
  class MorphClass {
   public:
    MorphClass() = default;

    MorphClass(CategoryRef carrier, std::vector<bool> members,
               std::string name = "")
        : _carrier(std::move(carrier)),
          _members(std::move(members)),
          _name(std::move(name)) {
      _members.resize(_carrier->num_morphisms(), false);
    }

    static MorphClass identities(CategoryRef C, std::string name = "") {
      std::vector<bool> members(C->num_morphisms(), false);
      for (ObjId x = 0; x < static_cast<ObjId>(C->num_objects()); ++x) {
        members[C->identity(x)] = true;
      }
      return MorphClass(std::move(C), std::move(members), std::move(name));
    }

    static MorphClass all(CategoryRef C, std::string name = "") {
      std::vector<bool> members(C->num_morphisms(), true);
      return MorphClass(std::move(C), std::move(members), std::move(name));
    }

    // Smallest composition-closed class containing the identities and seed.
    static MorphClass closure(CategoryRef C, std::vector<bool> seed,
                              std::string name = "") {
      seed.resize(C->num_morphisms(), false);
      for (ObjId x = 0; x < static_cast<ObjId>(C->num_objects()); ++x) {
        seed[C->identity(x)] = true;
      }
      std::vector<MorId> work;
      for (MorId f = 0; f < static_cast<MorId>(seed.size()); ++f) {
        if (seed[f]) {
          work.push_back(f);
        }
      }
      while (!work.empty()) {
        MorId f = work.back();
        work.pop_back();
        for (MorId g : C->out(C->dst(f))) {
          if (!seed[g]) {
            continue;
          }
          MorId h = C->compose(g, f);
          if (h != kNone && !seed[h]) {
            seed[h] = true;
            work.push_back(h);
          }
        }
        for (MorId e : C->in(C->src(f))) {
          if (!seed[e]) {
            continue;
          }
          MorId h = C->compose(f, e);
          if (h != kNone && !seed[h]) {
            seed[h] = true;
            work.push_back(h);
          }
        }
      }
      return MorphClass(std::move(C), std::move(seed), std::move(name));
    }

    CategoryRef const& carrier() const noexcept {
      return _carrier;
    }

    bool contains(MorId f) const {
      return f >= 0 && static_cast<std::size_t>(f) < _members.size()
             && _members[f];
    }

    std::vector<bool> const& mask() const noexcept {
      return _members;
    }

    std::vector<MorId> members() const {
      std::vector<MorId> result;
      for (MorId f = 0; f < static_cast<MorId>(_members.size()); ++f) {
        if (_members[f]) {
          result.push_back(f);
        }
      }
      return result;
    }

    // Members that are not identities, in canonical order.
    std::vector<MorId> nonidentity_members() const {
      std::vector<MorId> result;
      for (MorId f = 0; f < static_cast<MorId>(_members.size()); ++f) {
        if (_members[f] && !_carrier->is_identity(f)) {
          result.push_back(f);
        }
      }
      return result;
    }

    std::size_t size() const {
      std::size_t n = 0;
      for (bool b : _members) {
        n += b;
      }
      return n;
    }

    std::string const& name() const noexcept {
      return _name;
    }

    void rename(std::string name) {
      _name = std::move(name);
    }

    bool operator==(MorphClass const& other) const {
      return _carrier == other._carrier && _members == other._members;
    }

   private:
    CategoryRef       _carrier;
    std::vector<bool> _members;
    std::string       _name;
  };

  inline ValidationReport validate_class(MorphClass const& S) {
    ValidationReport report;
    auto const&      C = *S.carrier();
    for (ObjId x = 0; x < static_cast<ObjId>(C.num_objects()); ++x) {
      if (!S.contains(C.identity(x))) {
        report.add("missing identity", {C.morphism_name(C.identity(x))});
      }
    }
    for (MorId f : S.members()) {
      for (MorId g : C.out(C.dst(f))) {
        if (!S.contains(g)) {
          continue;
        }
        MorId h = C.compose(g, f);
        if (h != kNone && !S.contains(h)) {
          report.add("not composition-closed",
                     {C.morphism_name(g), C.morphism_name(f),
                      C.morphism_name(h)});
        }
      }
    }
    return report;
  }

}  // namespace locwb
