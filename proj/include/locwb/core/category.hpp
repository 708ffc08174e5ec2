#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "locwb/core/errors.hpp"

namespace locwb {

  using ObjId = std::int32_t;
  using MorId = std::int32_t;

  inline constexpr MorId kNone = -1;

  struct Morphism {
    std::string name;
    ObjId       src = 0;
    ObjId       dst = 0;
  };

  inline std::string identity_name(std::string_view object) {
    return "id_" + std::string(object);
  }

  // Composition table. Dense for small categories; otherwise one row per
  // f of (g, g o f) pairs sorted by g.
  class CompositionTable {
   public:
    using Row = std::vector<std::pair<MorId, MorId>>;

    CompositionTable() = default;

    explicit CompositionTable(std::size_t num_morphisms)
        : _size(num_morphisms) {
      if (_size <= kDenseLimit) {
        _dense.assign(_size * _size, kNone);
      } else {
        _rows.resize(_size);
      }
    }

    MorId get(MorId g, MorId f) const {
      if (g < 0 || f < 0 || static_cast<std::size_t>(g) >= _size
          || static_cast<std::size_t>(f) >= _size) {
        return kNone;
      }
      if (!_dense.empty()) {
        return _dense[g * _size + f];
      }
      auto const& row = _rows[f];
      auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(g, kNone));
      return it != row.end() && it->first == g ? it->second : kNone;
    }

    void set(MorId g, MorId f, MorId h) {
      if (!_dense.empty()) {
        _dense[g * _size + f] = h;
        return;
      }
      auto& row = _rows[f];
      auto  it  = std::lower_bound(row.begin(), row.end(), std::make_pair(g, kNone));
      if (it != row.end() && it->first == g) {
        if (h == kNone) {
          row.erase(it);
        } else {
          it->second = h;
        }
      } else if (h != kNone) {
        row.insert(it, {g, h});
      }
    }

    // Replaces row f; `row` is sorted by g without repeats.
    void set_row(MorId f, Row row) {
      if (!_dense.empty()) {
        for (auto [g, h] : row) {
          _dense[g * _size + f] = h;
        }
        return;
      }
      _rows[f] = std::move(row);
    }

   private:
    static constexpr std::size_t kDenseLimit = 256;

    std::size_t        _size = 0;
    std::vector<MorId> _dense;
    std::vector<Row>   _rows;
  };

  class CategoryBuilder;

  // A finite category given by an explicit composition table. Objects and
  // morphisms are stored in lexicographic order of their names once built,
  // so ids double as the canonical order.
  class FinCategory {
   public:
    FinCategory() = default;

    std::string const& name() const noexcept {
      return _name;
    }

    std::size_t num_objects() const noexcept {
      return _objects.size();
    }

    std::size_t num_morphisms() const noexcept {
      return _morphisms.size();
    }

    std::size_t num_nonidentity() const noexcept {
      return _morphisms.size() - _objects.size();
    }

    std::string const& object_name(ObjId x) const {
      return _objects.at(x);
    }

    std::vector<std::string> const& object_names() const noexcept {
      return _objects;
    }

    Morphism const& morphism(MorId f) const {
      return _morphisms.at(f);
    }

    std::string const& morphism_name(MorId f) const {
      return _morphisms.at(f).name;
    }

    ObjId src(MorId f) const {
      return _morphisms[f].src;
    }

    ObjId dst(MorId f) const {
      return _morphisms[f].dst;
    }

    MorId identity(ObjId x) const {
      return _identity[x];
    }

    bool is_identity(MorId f) const {
      return _identity[_morphisms[f].src] == f;
    }

    // g o f, or kNone when (g, f) is not composable or the entry is absent.
    MorId compose(MorId g, MorId f) const {
      return _table.get(g, f);
    }

    std::span<MorId const> hom(ObjId a, ObjId b) const {
      auto const& row = _out[a];
      auto        lo  = std::lower_bound(
          row.begin(), row.end(), b, [this](MorId f, ObjId v) {
            return _morphisms[f].dst < v;
          });
      auto hi = std::upper_bound(lo, row.end(), b, [this](ObjId v, MorId f) {
        return v < _morphisms[f].dst;
      });
      return {lo, hi};
    }

    // Morphisms with source a, ordered by (dst, id).
    std::span<MorId const> out(ObjId a) const {
      return _out[a];
    }

    // Morphisms with target b, ordered by (src, id).
    std::span<MorId const> in(ObjId b) const {
      return _in[b];
    }

    std::optional<ObjId> find_object(std::string_view name) const {
      auto it = _object_index.find(std::string(name));
      if (it == _object_index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    std::optional<MorId> find_morphism(std::string_view name) const {
      auto it = _morphism_index.find(std::string(name));
      if (it == _morphism_index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    ObjId object(std::string_view name) const {
      auto x = find_object(name);
      if (!x) {
        throw InvalidInput("unknown object '" + std::string(name)
                           + "' in category " + _name);
      }
      return *x;
    }

    MorId morphism_id(std::string_view name) const {
      auto f = find_morphism(name);
      if (!f) {
        throw InvalidInput("unknown morphism '" + std::string(name)
                           + "' in category " + _name);
      }
      return *f;
    }

    void rename(std::string name) {
      _name = std::move(name);
    }

   private:
    friend class CategoryBuilder;

    void index() {
      _object_index.clear();
      _morphism_index.clear();
      for (std::size_t i = 0; i < _objects.size(); ++i) {
        _object_index.emplace(_objects[i], static_cast<ObjId>(i));
      }
      for (std::size_t i = 0; i < _morphisms.size(); ++i) {
        _morphism_index.emplace(_morphisms[i].name, static_cast<MorId>(i));
      }
      _out.assign(_objects.size(), {});
      _in.assign(_objects.size(), {});
      for (std::size_t i = 0; i < _morphisms.size(); ++i) {
        _out[_morphisms[i].src].push_back(static_cast<MorId>(i));
        _in[_morphisms[i].dst].push_back(static_cast<MorId>(i));
      }
      for (auto& row : _out) {
        std::stable_sort(row.begin(), row.end(), [this](MorId f, MorId g) {
          return _morphisms[f].dst < _morphisms[g].dst;
        });
      }
      for (auto& row : _in) {
        std::stable_sort(row.begin(), row.end(), [this](MorId f, MorId g) {
          return _morphisms[f].src < _morphisms[g].src;
        });
      }
    }

    std::string                            _name;
    std::vector<std::string>               _objects;
    std::vector<Morphism>                  _morphisms;
    std::vector<MorId>                     _identity;
    CompositionTable                       _table;
    std::vector<std::vector<MorId>>        _out;
    std::vector<std::vector<MorId>>        _in;
    std::unordered_map<std::string, ObjId> _object_index;
    std::unordered_map<std::string, MorId> _morphism_index;
  };

  using CategoryRef = std::shared_ptr<FinCategory const>;

  // Incremental construction of a FinCategory. Identities are generated
  // with reserved names id_<object>; composites with identities are filled
  // in automatically unless set explicitly.
  class CategoryBuilder {
   public:
    explicit CategoryBuilder(std::string name = "") : _name(std::move(name)) {}

    ObjId add_object(std::string name) {
      if (_object_index.count(name)) {
        throw InvalidInput("duplicate object '" + name + "'");
      }
      auto x = static_cast<ObjId>(_objects.size());
      _object_index.emplace(name, x);
      std::string id = identity_name(name);
      if (_morphism_index.count(id)) {
        throw InvalidInput("identity name '" + id + "' already in use");
      }
      _objects.push_back(std::move(name));
      _identity.push_back(push_morphism(std::move(id), x, x));
      return x;
    }

    MorId add_morphism(std::string name, ObjId src, ObjId dst) {
      if (src < 0 || dst < 0 || static_cast<std::size_t>(src) >= _objects.size()
          || static_cast<std::size_t>(dst) >= _objects.size()) {
        throw InvalidInput("morphism '" + name + "' has an unknown endpoint");
      }
      if (name.rfind("id_", 0) == 0
          && _object_index.count(name.substr(3)) != 0) {
        throw InvalidInput("identity '" + name
                           + "' is generated and may not be declared");
      }
      if (_morphism_index.count(name)) {
        throw InvalidInput("duplicate morphism '" + name + "'");
      }
      return push_morphism(std::move(name), src, dst);
    }

    MorId add_morphism(std::string name, std::string_view src,
                       std::string_view dst) {
      return add_morphism(std::move(name), object(src), object(dst));
    }

    // Records g o f = h. The pair must be composable; the typing of h is
    // left to validate_category.
    void set_composite(MorId g, MorId f, MorId h) {
      if (_morphisms.at(g).src != _morphisms.at(f).dst) {
        throw InvalidInput("'" + _morphisms[g].name + "' and '"
                           + _morphisms[f].name + "' are not composable");
      }
      (void) _morphisms.at(h);
      if (_composites.size() <= static_cast<std::size_t>(f)) {
        _composites.resize(_morphisms.size());
      }
      _composites[f].emplace_back(g, h);
    }

    void set_composite(std::string_view g, std::string_view f,
                       std::string_view h) {
      set_composite(morphism(g), morphism(f), morphism(h));
    }

    bool has_composite(MorId g, MorId f) const {
      return composite(g, f).has_value();
    }

    // The latest value recorded for g o f.
    std::optional<MorId> composite(MorId g, MorId f) const {
      if (f < 0 || static_cast<std::size_t>(f) >= _composites.size()) {
        return std::nullopt;
      }
      auto const& row = _composites[f];
      for (auto it = row.rbegin(); it != row.rend(); ++it) {
        if (it->first == g) {
          return it->second;
        }
      }
      return std::nullopt;
    }

    ObjId object(std::string_view name) const {
      auto it = _object_index.find(std::string(name));
      if (it == _object_index.end()) {
        throw InvalidInput("unknown object '" + std::string(name) + "'");
      }
      return it->second;
    }

    std::optional<ObjId> find_object(std::string_view name) const {
      auto it = _object_index.find(std::string(name));
      if (it == _object_index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    MorId morphism(std::string_view name) const {
      auto it = _morphism_index.find(std::string(name));
      if (it == _morphism_index.end()) {
        throw InvalidInput("unknown morphism '" + std::string(name) + "'");
      }
      return it->second;
    }

    std::optional<MorId> find_morphism(std::string_view name) const {
      auto it = _morphism_index.find(std::string(name));
      if (it == _morphism_index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    MorId identity(ObjId x) const {
      return _identity.at(x);
    }

    std::size_t num_objects() const noexcept {
      return _objects.size();
    }

    std::size_t num_morphisms() const noexcept {
      return _morphisms.size();
    }

    Morphism const& morphism_data(MorId f) const {
      return _morphisms.at(f);
    }

    std::string const& object_name(ObjId x) const {
      return _objects.at(x);
    }

    bool is_identity(MorId f) const {
      return _identity[_morphisms[f].src] == f;
    }

    // Builds the category with objects and morphisms sorted by name.
    FinCategory build() const {
      FinCategory result;
      result._name = _name;

      std::vector<ObjId> obj_order(_objects.size());
      std::iota(obj_order.begin(), obj_order.end(), 0);
      std::sort(obj_order.begin(), obj_order.end(), [this](ObjId a, ObjId b) {
        return _objects[a] < _objects[b];
      });
      std::vector<ObjId> obj_new(_objects.size());
      for (std::size_t i = 0; i < obj_order.size(); ++i) {
        obj_new[obj_order[i]] = static_cast<ObjId>(i);
        result._objects.push_back(_objects[obj_order[i]]);
      }

      std::vector<MorId> mor_order(_morphisms.size());
      std::iota(mor_order.begin(), mor_order.end(), 0);
      std::sort(mor_order.begin(), mor_order.end(), [this](MorId a, MorId b) {
        return _morphisms[a].name < _morphisms[b].name;
      });
      std::vector<MorId> mor_new(_morphisms.size());
      for (std::size_t i = 0; i < mor_order.size(); ++i) {
        auto const& m = _morphisms[mor_order[i]];
        mor_new[mor_order[i]] = static_cast<MorId>(i);
        result._morphisms.push_back({m.name, obj_new[m.src], obj_new[m.dst]});
      }

      result._identity.assign(_objects.size(), kNone);
      for (std::size_t x = 0; x < _objects.size(); ++x) {
        result._identity[obj_new[x]] = mor_new[_identity[x]];
      }

      result._table = CompositionTable(_morphisms.size());
      for (std::size_t f = 0; f < _morphisms.size(); ++f) {
        auto const&             mf = _morphisms[f];
        CompositionTable::Row   row;
        if (f < _composites.size()) {
          // Later entries win: keep the last occurrence of each g.
          for (auto it = _composites[f].rbegin(); it != _composites[f].rend(); ++it) {
            row.emplace_back(mor_new[it->first], mor_new[it->second]);
          }
          std::stable_sort(row.begin(), row.end(), [](auto const& x, auto const& y) {
            return x.first < y.first;
          });
          row.erase(std::unique(row.begin(), row.end(),
                                [](auto const& x, auto const& y) {
                                  return x.first == y.first;
                                }),
                    row.end());
        }
        auto add_default = [&row](MorId g, MorId h) {
          auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(g, kNone));
          if (it == row.end() || it->first != g) {
            row.insert(it, {g, h});
          }
        };
        // g o id = g is stored in the row of the identity.
        add_default(mor_new[_identity[mf.dst]], mor_new[f]);
        result._table.set_row(mor_new[f], std::move(row));
      }
      for (std::size_t f = 0; f < _morphisms.size(); ++f) {
        auto const& mf     = _morphisms[f];
        MorId       id_src = _identity[mf.src];
        if (!has_composite(static_cast<MorId>(f), id_src)) {
          result._table.set(mor_new[f], mor_new[id_src], mor_new[f]);
        }
      }
      result.index();
      return result;
    }

    CategoryRef build_ref() const {
      return std::make_shared<FinCategory const>(build());
    }

   private:
    MorId push_morphism(std::string name, ObjId src, ObjId dst) {
      auto f = static_cast<MorId>(_morphisms.size());
      _morphism_index.emplace(name, f);
      _morphisms.push_back({std::move(name), src, dst});
      return f;
    }

    std::string                                _name;
    std::vector<std::string>                   _objects;
    std::vector<Morphism>                      _morphisms;
    std::vector<MorId>                         _identity;
    std::unordered_map<std::string, ObjId>     _object_index;
    std::unordered_map<std::string, MorId>     _morphism_index;
    // By f: recorded (g, g o f), in order of recording.
    std::vector<std::vector<std::pair<MorId, MorId>>> _composites;
  };

}  // namespace locwb
