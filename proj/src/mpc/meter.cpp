#include "tnmpcqep/mpc/meter.hpp"

namespace tnmpcqep::mpc {

std::string_view to_string(SecurityMode mode) {
  return mode == SecurityMode::Active ? "active" : "passive";
}

std::uint64_t& CostReport::operator[](Link link) {
  switch (link) {
    case Link::ClientToNode: return client_to_node_bits;
    case Link::NodeToNode: return node_to_node_bits;
    case Link::Reconstruction: break;
  }
  return reconstruction_bits;
}

std::uint64_t CostReport::operator[](Link link) const {
  return const_cast<CostReport&>(*this)[link];
}

CostReport& CostReport::operator+=(const CostReport& o) {
  client_to_node_bits += o.client_to_node_bits;
  node_to_node_bits += o.node_to_node_bits;
  reconstruction_bits += o.reconstruction_bits;
  return *this;
}

CostReport operator*(CostReport a, std::uint64_t factor) {
  a.client_to_node_bits *= factor;
  a.node_to_node_bits *= factor;
  a.reconstruction_bits *= factor;
  return a;
}

void CostMeter::record_send(Link link, std::uint64_t bits) {
  wire_[link] += bits;
  if (scope_depth_ == 0) modeled_[link] += bits * factor();
}

CostMeter::ModelScope::ModelScope(CostMeter& meter) : meter_(&meter) { ++meter_->scope_depth_; }

CostMeter::ModelScope::~ModelScope() {
  if (open_) --meter_->scope_depth_;
}

void CostMeter::ModelScope::finish(const CostReport& passive_cost) {
  if (!open_) return;
  open_ = false;
  --meter_->scope_depth_;
  if (meter_->scope_depth_ == 0) meter_->modeled_ += passive_cost * meter_->factor();
}

}  // namespace tnmpcqep::mpc
