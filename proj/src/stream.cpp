#include <rqlp/stream.hpp>

#include <algorithm>

namespace rqlp {

AccessCounter::AccessCounter(Index rows, Index cols)
    : counts_(Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(rows, cols))
{
}

void AccessCounter::record_rows(Index first_row, Index count)
{
    counts_.middleRows(first_row, count).array() += 1u;
}

std::uint32_t AccessCounter::min_reads() const
{
    return counts_.size() == 0 ? 0u : counts_.minCoeff();
}

std::uint32_t AccessCounter::max_reads() const
{
    return counts_.size() == 0 ? 0u : counts_.maxCoeff();
}

DenseRowStream::DenseRowStream(const MatrixXd& a, Index block_size, AccessCounter* counter)
    : a_(a), block_size_(block_size), counter_(counter)
{
    detail::require(block_size >= 1, "DenseRowStream: block size must be positive");
}

std::optional<RowBlock> DenseRowStream::next()
{
    if (position_ >= a_.rows())
        return std::nullopt;
    const Index count = std::min(block_size_, a_.rows() - position_);
    RowBlock block{position_, a_.middleRows(position_, count)};
    if (counter_)
        counter_->record_rows(position_, count);
    position_ += count;
    return block;
}

} // namespace rqlp
