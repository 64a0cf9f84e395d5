#ifndef ANNULAR_REPORT_HPP
#define ANNULAR_REPORT_HPP

#include <mutex>
#include <string>
#include <vector>

namespace annular {

// One entry of the oracle-discrepancy log: a documented closed-form reference
// value disagreed with the defining computation beyond tolerance. The
// computed value is authoritative; the log keeps the reference visible.
struct OracleDiscrepancy {
    std::string context;
    double k = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double reference_value = 0.0;
    double computed_value = 0.0;
    double rel_error = 0.0;
};

class RunReport {
  public:
    void add(OracleDiscrepancy d) {
        std::lock_guard<std::mutex> lock(mu_);
        entries_.push_back(std::move(d));
    }
    const std::vector<OracleDiscrepancy>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

  private:
    std::mutex mu_;
    std::vector<OracleDiscrepancy> entries_;
};

}  // namespace annular

#endif
