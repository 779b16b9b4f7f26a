//! Benchmark fixtures shared by the criterion targets.

use dioph::ifs::RationalIfs;
use dioph::rational::rat;
use dioph::RationalMatrix;

/// Base-5 system with digit 4 removed.
pub fn base_five() -> RationalIfs {
    RationalIfs::missing_digit(5, &[0, 1, 2, 3]).expect("valid digits")
}

/// A 3×3 rational basis with a short vector hidden by shears.
pub fn sheared_basis() -> RationalMatrix {
    RationalMatrix::from_rows(vec![
        vec![rat(7, 3), rat(-11, 2), rat(5, 4)],
        vec![rat(1, 5), rat(9, 7), rat(-3, 2)],
        vec![rat(-2, 9), rat(4, 3), rat(13, 6)],
    ])
}
