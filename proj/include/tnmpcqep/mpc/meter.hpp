#pragma once

#include <cstdint>
#include <string_view>

namespace tnmpcqep::mpc {

enum class SecurityMode { Passive, Active };

std::string_view to_string(SecurityMode mode);

enum class Link { ClientToNode, NodeToNode, Reconstruction };

/// Bit counters for one run, one per metered link category.
struct CostReport {
  std::uint64_t client_to_node_bits = 0;
  std::uint64_t node_to_node_bits = 0;
  std::uint64_t reconstruction_bits = 0;

  std::uint64_t total() const {
    return client_to_node_bits + node_to_node_bits + reconstruction_bits;
  }
  std::uint64_t& operator[](Link link);
  std::uint64_t operator[](Link link) const;

  CostReport& operator+=(const CostReport& o);
  friend CostReport operator+(CostReport a, const CostReport& b) { return a += b; }
  friend CostReport operator*(CostReport a, std::uint64_t factor);
  friend bool operator==(const CostReport&, const CostReport&) = default;
};

/// Counts communication for a session. Two views are kept:
///   wire()   payload bits actually handed to the transport;
///   report() bits under the communication model, scaled by the security
///            factor (active = 2x every counter).
/// Outside a model scope every send is charged to both views. Inside a scope
/// (composite protocols such as division) sends only reach wire(), and the
/// scope charges its closed-form cost to report() on finish().
class CostMeter {
 public:
  explicit CostMeter(SecurityMode mode = SecurityMode::Passive) : mode_(mode) {}

  SecurityMode mode() const { return mode_; }
  std::uint64_t factor() const { return mode_ == SecurityMode::Active ? 2 : 1; }

  void record_send(Link link, std::uint64_t bits);

  const CostReport& report() const { return modeled_; }
  const CostReport& wire() const { return wire_; }

  class ModelScope {
   public:
    explicit ModelScope(CostMeter& meter);
    ModelScope(const ModelScope&) = delete;
    ModelScope& operator=(const ModelScope&) = delete;
    ~ModelScope();

    /// Charge the modeled (passive) cost and leave the scope.
    void finish(const CostReport& passive_cost);

   private:
    CostMeter* meter_;
    bool open_ = true;
  };

 private:
  SecurityMode mode_;
  int scope_depth_ = 0;
  CostReport modeled_;
  CostReport wire_;
};

}  // namespace tnmpcqep::mpc
