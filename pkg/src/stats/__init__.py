from src.stats.independence import (
    TestResult,
    bonferroni,
    chi_square_sf,
    chi_square_test,
    pearson_statistic,
    rank_sum_test,
)

__all__ = [
    "TestResult",
    "chi_square_sf",
    "chi_square_test",
    "pearson_statistic",
    "rank_sum_test",
    "bonferroni",
]
