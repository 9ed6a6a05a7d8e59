#pragma once

#include <cassert>
#include <compare>
#include <cstdint>

namespace hfsim {

// Virtual time, fixed-point microseconds. All simulation timestamps and
// timer arithmetic go through this type so interval boundaries are exact.
class VirtualTime {
 public:
  constexpr VirtualTime() = default;

  static constexpr VirtualTime from_micros(int64_t us) { return VirtualTime(us); }
  static constexpr VirtualTime from_seconds(double s) {
    return VirtualTime(static_cast<int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5)));
  }

  constexpr int64_t micros() const { return us_; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

  constexpr auto operator<=>(const VirtualTime&) const = default;

  constexpr VirtualTime operator+(VirtualTime o) const { return VirtualTime(us_ + o.us_); }
  constexpr VirtualTime operator-(VirtualTime o) const { return VirtualTime(us_ - o.us_); }
  VirtualTime& operator+=(VirtualTime o) {
    us_ += o.us_;
    return *this;
  }

 private:
  constexpr explicit VirtualTime(int64_t us) : us_(us) {}
  int64_t us_ = 0;
};

// Monotone simulation clock. Advanced only by packet timestamps and timers.
class VirtualClock {
 public:
  VirtualTime now() const { return now_; }

  void advance_to(VirtualTime t) {
    assert(t >= now_);
    if (t > now_) now_ = t;
  }

 private:
  VirtualTime now_;
};

}  // namespace hfsim
