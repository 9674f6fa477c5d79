#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>

namespace ledgerchat {

// Unix seconds.
using Clock = std::function<std::int64_t()>;

Clock SystemClock();

// Settable clock shared by everything built from it in a test.
class ManualClock {
 public:
  explicit ManualClock(std::int64_t start = 1'700'000'000)
      : now_(std::make_shared<std::atomic<std::int64_t>>(start)) {}

  std::int64_t now() const { return now_->load(); }
  void Set(std::int64_t t) { now_->store(t); }
  void Advance(std::int64_t dt) { now_->fetch_add(dt); }

  Clock AsClock() const {
    return [p = now_] { return p->load(); };
  }

 private:
  std::shared_ptr<std::atomic<std::int64_t>> now_;
};

}  // namespace ledgerchat
