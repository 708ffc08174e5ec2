#pragma once

#include <string>
#include <vector>

namespace locwb {

  enum class Status { Holds, Fails, Unknown };

  inline char const* to_string(Status s) {
    switch (s) {
      case Status::Holds: return "Holds";
      case Status::Fails: return "Fails";
      case Status::Unknown: return "Unknown";
    }
    return "";
  }

  struct HypothesisReport {
    std::string id;
    Status      status = Status::Holds;
    // The offending index (object, arrow or arrow pair names) of the first
    // failure, or of the first undecided index when Unknown.
    std::vector<std::string> witness;
    std::string              detail;
    std::size_t              checked = 0;
    std::size_t              unknown = 0;
    // Set when an Unknown comes from an undecided fundamental group.
    bool pi1_unknown = false;

    bool holds() const {
      return status == Status::Holds;
    }
    bool fails() const {
      return status == Status::Fails;
    }
  };

  // Folds the verdict for one index into an aggregate report: the first
  // failure wins; Unknown is kept only while nothing fails.
  inline void record(HypothesisReport& r, Status s,
                     std::vector<std::string> const& index,
                     std::string const& detail, bool pi1 = false) {
    ++r.checked;
    if (s == Status::Holds || r.status == Status::Fails) {
      if (s == Status::Unknown) {
        ++r.unknown;
      }
      return;
    }
    if (s == Status::Fails) {
      r.status  = Status::Fails;
      r.witness = index;
      r.detail  = detail;
      return;
    }
    ++r.unknown;
    if (r.status == Status::Holds) {
      r.status      = Status::Unknown;
      r.witness     = index;
      r.detail      = detail;
      r.pi1_unknown = pi1;
    }
  }

  inline HypothesisReport const* find_report(
      std::vector<HypothesisReport> const& reports, std::string const& id) {
    for (auto const& r : reports) {
      if (r.id == id) {
        return &r;
      }
    }
    return nullptr;
  }

  // Holds only if every listed report holds.
  inline Status conjunction(std::vector<HypothesisReport> const& reports,
                            std::vector<std::string> const&      ids) {
    Status s = Status::Holds;
    for (auto const& id : ids) {
      auto const* r = find_report(reports, id);
      if (r && r->status == Status::Fails) {
        return Status::Fails;
      }
      if (!r || r->status == Status::Unknown) {
        s = Status::Unknown;
      }
    }
    return s;
  }

}  // namespace locwb
