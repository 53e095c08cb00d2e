#pragma once

#include <cstddef>
#include <vector>

#include "hmdrec/error.hpp"

namespace hmdrec::recognizer {

/// Fixed-capacity FIFO that overwrites its oldest element once full.
template <typename T>
class RingBuffer {
public:
    explicit RingBuffer(std::size_t capacity) : storage_(capacity) {
        if (capacity == 0) throw ConfigError("RingBuffer: capacity must be >= 1");
    }

    void push(const T& value) {
        storage_[head_] = value;
        head_ = (head_ + 1) % storage_.size();
        if (size_ < storage_.size()) ++size_;
    }

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return storage_.size(); }
    bool full() const { return size_ == storage_.size(); }
    void clear() {
        size_ = 0;
        head_ = 0;
    }

    /// i = 0 is the oldest element.
    const T& operator[](std::size_t i) const {
        const std::size_t oldest = (head_ + storage_.size() - size_) % storage_.size();
        return storage_[(oldest + i) % storage_.size()];
    }

    /// Copy in oldest-to-newest order.
    std::vector<T> to_vector() const {
        std::vector<T> out;
        out.reserve(size_);
        for (std::size_t i = 0; i < size_; ++i) out.push_back((*this)[i]);
        return out;
    }

private:
    std::vector<T> storage_;
    std::size_t head_ = 0;  // next write position
    std::size_t size_ = 0;
};

}  // namespace hmdrec::recognizer
