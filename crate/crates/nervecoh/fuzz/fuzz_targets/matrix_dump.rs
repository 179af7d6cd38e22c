#![no_main]

use libfuzzer_sys::fuzz_target;
use nervecoh::homalg::{RingSpec, SparseMatrix};

// First input byte selects the ring, the rest is parsed as matrix dump text.
// Any accepted matrix must survive a serialize/parse round trip unchanged:
// parsing canonicalizes (sorts, sums duplicates, reduces mod p, drops zeros)
// and the dump of a canonical matrix is itself canonical.
fuzz_target!(|data: &[u8]| {
    let Some((&tag, rest)) = data.split_first() else {
        return;
    };
    let ring = match tag % 3 {
        0 => RingSpec::Integers,
        1 => RingSpec::Rationals,
        _ => RingSpec::PrimeField(7),
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(matrix) = SparseMatrix::parse_dump(ring, text) {
        let dumped = matrix.to_dump_string();
        let back = SparseMatrix::parse_dump(ring, &dumped).expect("canonical dump must reparse");
        assert_eq!(matrix, back);
    }
});
