#include "support.hpp"

#include <rqlp/stream.hpp>

#include <doctest.h>

using namespace rqlp;

TEST_CASE("DenseRowStream delivers every row once, in order")
{
    const MatrixXd a = testing::random_matrix(10, 3, 1);
    for (Index bs : {1, 3, 4, 10, 64}) {
        AccessCounter counter(10, 3);
        DenseRowStream s(a, bs, &counter);
        MatrixXd rebuilt(10, 3);
        Index expected_first = 0;
        while (auto b = s.next()) {
            CHECK(b->first_row == expected_first);
            CHECK(b->rows.rows() <= bs);
            rebuilt.middleRows(b->first_row, b->rows.rows()) = b->rows;
            expected_first += b->rows.rows();
        }
        CHECK(expected_first == 10);
        CHECK(rebuilt == a);
        CHECK(counter.uniform(1));
        CHECK_FALSE(s.next().has_value());
    }
}

TEST_CASE("AccessCounter")
{
    AccessCounter c(4, 2);
    CHECK(c.uniform(0));
    c.record_rows(0, 4);
    c.record_rows(1, 2);
    CHECK(c.min_reads() == 1);
    CHECK(c.max_reads() == 2);
    CHECK(c.reads(1, 0) == 2);
    CHECK(c.reads(3, 1) == 1);
    CHECK_FALSE(c.uniform(1));
}

TEST_CASE("DenseRowStream rejects a nonpositive block size")
{
    const MatrixXd a = MatrixXd::Ones(2, 2);
    CHECK_THROWS_AS(DenseRowStream(a, 0), std::invalid_argument);
}
