#pragma once

// One-shot row-block views of a matrix.  The single-pass algorithms consume
// one of these and never see the matrix itself.

#include <rqlp/core.hpp>

#include <cstdint>
#include <optional>

namespace rqlp {

/// Per-entry read counter for instrumenting streams.
class AccessCounter {
public:
    AccessCounter(Index rows, Index cols);

    void record_rows(Index first_row, Index count);

    std::uint32_t reads(Index i, Index j) const { return counts_(i, j); }
    std::uint32_t min_reads() const;
    std::uint32_t max_reads() const;

    /// True when every entry was read exactly `n` times.
    bool uniform(std::uint32_t n) const { return min_reads() == n && max_reads() == n; }

private:
    Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic> counts_;
};

struct RowBlock {
    Index first_row = 0;
    MatrixXd rows;
};

class RowStream {
public:
    virtual ~RowStream() = default;

    virtual Index rows() const = 0;
    virtual Index cols() const = 0;

    /// Next block in ascending row order, or nullopt once the matrix has been
    /// delivered.  There is no rewind.
    virtual std::optional<RowBlock> next() = 0;
};

/// Streams an in-memory matrix in blocks of `block_size` rows.
class DenseRowStream final : public RowStream {
public:
    explicit DenseRowStream(const MatrixXd& a, Index block_size = 64, AccessCounter* counter = nullptr);

    Index rows() const override { return a_.rows(); }
    Index cols() const override { return a_.cols(); }
    std::optional<RowBlock> next() override;

private:
    const MatrixXd& a_;
    Index block_size_;
    AccessCounter* counter_;
    Index position_ = 0;
};

} // namespace rqlp
