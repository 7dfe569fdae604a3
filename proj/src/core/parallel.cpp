#include "tflab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace tflab {
namespace {

std::size_t default_workers() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TFLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = static_cast<std::size_t>(v);
    }
    return n;
}

std::atomic<std::size_t> g_override{0};

// Persistent pool; the calling thread takes part in every job.
class Pool {
public:
    explicit Pool(std::size_t extra) {
        for (std::size_t i = 0; i < extra; ++i) threads_.emplace_back([this] { loop(); });
    }
    ~Pool() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }
    std::size_t size() const { return threads_.size() + 1; }

    void run(std::size_t chunks, const std::function<void(std::size_t)>& body, std::size_t helpers) {
        std::unique_lock<std::mutex> job_lock(job_mu_);
        {
            std::lock_guard<std::mutex> lock(mu_);
            body_ = &body;
            chunks_ = chunks;
            next_.store(0);
            active_ = std::min(helpers, threads_.size());
            pending_ = active_;
            ++generation_;
        }
        cv_.notify_all();
        work();
        std::unique_lock<std::mutex> lock(mu_);
        done_cv_.wait(lock, [this] { return pending_ == 0; });
        body_ = nullptr;
    }

private:
    void work() {
        for (;;) {
            const std::size_t c = next_.fetch_add(1);
            if (c >= chunks_) break;
            (*body_)(c);
        }
    }
    void loop() {
        std::size_t seen = 0;
        std::size_t index = 0;
        {
            std::lock_guard<std::mutex> lock(mu_);
            index = ids_++;
        }
        for (;;) {
            std::unique_lock<std::mutex> lock(mu_);
            cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            if (index >= active_) continue;
            lock.unlock();
            work();
            lock.lock();
            if (--pending_ == 0) done_cv_.notify_one();
        }
    }

    std::vector<std::thread> threads_;
    std::mutex mu_, job_mu_;
    std::condition_variable cv_, done_cv_;
    const std::function<void(std::size_t)>* body_ = nullptr;
    std::size_t chunks_ = 0, active_ = 0, pending_ = 0, generation_ = 0, ids_ = 0;
    std::atomic<std::size_t> next_{0};
    bool stop_ = false;
};

Pool& pool() {
    static Pool p(std::max<std::size_t>(default_workers(), 4) - 1);
    return p;
}

}  // namespace

std::size_t worker_count() {
    const std::size_t o = g_override.load();
    return o ? o : default_workers();
}

void set_worker_count(std::size_t n) { g_override.store(n); }

void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    Pool& p = pool();
    if (p.size() < 2) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    p.run(chunks, body, workers - 1);
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial) {
    const std::size_t chunks = chunk_count(n);
    std::vector<double> parts(chunks, 0.0);
    parallel_chunks(chunks, [&](std::size_t c) {
        const std::size_t b = c * kChunk;
        parts[c] = partial(b, std::min(n, b + kChunk));
    });
    double s = 0.0;
    for (double p : parts) s += p;
    return s;
}

}  // namespace tflab
