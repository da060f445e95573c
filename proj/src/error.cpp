#include "vortex/error.hpp"

#include <sstream>

namespace vortex {

namespace {

std::string collision_message(std::size_t i, std::size_t j, double d, const std::string& stage,
                              long step) {
    std::ostringstream os;
    os << "near collision between vortices " << i << " and " << j << " (distance " << d
       << ") during " << stage;
    if (step >= 0) os << " at step " << step;
    return os.str();
}

}  // namespace

NearCollision::NearCollision(std::size_t i, std::size_t j, double distance, std::string stage,
                             long step)
    : Error(collision_message(i, j, distance, stage, step)),
      first_(i),
      second_(j),
      distance_(distance),
      stage_(std::move(stage)),
      step_(step) {}

NearCollision NearCollision::at_step(long step) const {
    return NearCollision(first_, second_, distance_, stage_, step);
}

AcceptanceFailure::AcceptanceFailure(std::size_t attempts)
    : Error("rejection sampling failed after " + std::to_string(attempts) + " attempts"),
      attempts_(attempts) {}

}  // namespace vortex
