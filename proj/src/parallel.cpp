#include "sbv/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace sbv {

namespace {

std::atomic<int> g_override{0};

int detect_threads() {
  if (const char* env = std::getenv("SBV_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

thread_local bool tl_inside_pool = false;

// Persistent pool. Each run() publishes a job under the mutex, wakes every
// worker, and the main thread joins in claiming chunks. A worker that wakes
// after the chunks are drained simply acknowledges and sleeps again; run()
// returns only after every worker acknowledged, so the next job can never
// overwrite one still being read.
class Pool {
 public:
  static Pool& get() {
    static Pool pool;
    return pool;
  }

  void run(std::size_t nchunks, const std::function<void(std::size_t)>& chunk_fn,
           int workers_wanted) {
    ensure_workers(workers_wanted - 1);
    {
      std::lock_guard lock(m_);
      job_ = &chunk_fn;
      total_ = nchunks;
      next_.store(0, std::memory_order_relaxed);
      pending_ = static_cast<int>(workers_.size());
      ++generation_;
    }
    cv_work_.notify_all();
    // The caller participates too; flag it so a nested parallel_for inside a
    // chunk degrades to serial instead of re-entering the pool mid-job.
    tl_inside_pool = true;
    claim_chunks(chunk_fn, nchunks);
    tl_inside_pool = false;
    std::unique_lock lock(m_);
    cv_done_.wait(lock, [&] { return pending_ == 0; });
    job_ = nullptr;
  }

  ~Pool() {
    {
      std::lock_guard lock(m_);
      stop_ = true;
    }
    cv_work_.notify_all();
    for (auto& t : workers_) t.join();
  }

 private:
  void ensure_workers(int want) {
    std::lock_guard lock(m_);
    while (static_cast<int>(workers_.size()) < want) {
      workers_.emplace_back([this] { worker_loop(); });
    }
  }

  void claim_chunks(const std::function<void(std::size_t)>& fn, std::size_t total) {
    for (;;) {
      const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
      if (i >= total) break;
      fn(i);
    }
  }

  void worker_loop() {
    tl_inside_pool = true;
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(std::size_t)>* fn = nullptr;
      std::size_t total = 0;
      {
        std::unique_lock lock(m_);
        cv_work_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        fn = job_;
        total = total_;
      }
      if (fn != nullptr) claim_chunks(*fn, total);
      {
        std::lock_guard lock(m_);
        if (--pending_ == 0) cv_done_.notify_one();
      }
    }
  }

  std::mutex m_;
  std::condition_variable cv_work_;
  std::condition_variable cv_done_;
  std::vector<std::thread> workers_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::atomic<std::size_t> next_{0};
  std::size_t total_ = 0;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

}  // namespace

int thread_count() {
  const int o = g_override.load();
  if (o > 0) return o;
  static const int detected = detect_threads();
  return detected;
}

void set_thread_count(int n) { g_override.store(n); }

void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (grain == 0) grain = 1;
  const std::size_t nchunks = (n + grain - 1) / grain;
  const int workers = thread_count();
  if (workers <= 1 || nchunks <= 1 || tl_inside_pool) {
    for (std::size_t c = 0; c < nchunks; ++c) {
      fn(c * grain, std::min(n, (c + 1) * grain));
    }
    return;
  }
  Pool::get().run(
      nchunks,
      [&](std::size_t c) { fn(c * grain, std::min(n, (c + 1) * grain)); },
      workers);
}

}  // namespace sbv
