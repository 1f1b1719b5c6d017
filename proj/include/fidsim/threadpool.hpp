#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fidsim {

// Fixed-size pool running indexed batches. Each task index is claimed by
// exactly one worker and writes only its own result slot, so outputs are
// independent of scheduling order. With workers <= 1 everything runs inline.
// Task functions must not throw; callers wrap exceptions themselves.
class ThreadPool {
  public:
    explicit ThreadPool(int workers) {
        int n = workers - 1; // calling thread participates in batches
        for (int i = 0; i < n; ++i)
            threads_.emplace_back([this] { worker_loop(); });
    }

    ~ThreadPool() {
        {
            std::lock_guard<std::mutex> lk(mu_);
            stopping_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    void parallel_for(int count, const std::function<void(int)>& fn) {
        if (count <= 0) return;
        if (threads_.empty()) {
            for (int i = 0; i < count; ++i) fn(i);
            return;
        }
        {
            std::lock_guard<std::mutex> lk(mu_);
            fn_ = &fn;
            limit_ = count;
            next_.store(0, std::memory_order_relaxed);
            active_ = static_cast<int>(threads_.size());
            generation_++;
        }
        cv_.notify_all();
        claim_loop(fn);
        // A batch is over only once every worker has checked out, so no
        // stale claim can leak into the next batch.
        std::unique_lock<std::mutex> lk(mu_);
        idle_cv_.wait(lk, [this] { return active_ == 0; });
        fn_ = nullptr;
    }

    int size() const { return static_cast<int>(threads_.size()) + 1; }

  private:
    void claim_loop(const std::function<void(int)>& fn) {
        while (true) {
            int i = next_.fetch_add(1, std::memory_order_relaxed);
            if (i >= limit_) break;
            fn(i);
        }
    }

    void worker_loop() {
        long seen = 0;
        while (true) {
            const std::function<void(int)>* fn = nullptr;
            {
                std::unique_lock<std::mutex> lk(mu_);
                cv_.wait(lk, [&] { return stopping_ || generation_ != seen; });
                if (stopping_) return;
                seen = generation_;
                fn = fn_;
            }
            claim_loop(*fn);
            {
                std::lock_guard<std::mutex> lk(mu_);
                if (--active_ == 0) idle_cv_.notify_all();
            }
        }
    }

    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable cv_, idle_cv_;
    const std::function<void(int)>* fn_ = nullptr;
    std::atomic<int> next_{0};
    int limit_ = 0;
    int active_ = 0;
    long generation_ = 0;
    bool stopping_ = false;
};

} // namespace fidsim
