#![no_main]

use libfuzzer_sys::fuzz_target;
use nervecoh::homalg::RingSpec;

// Any selector string that parses must print a selector that parses back to
// the same ring.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ring) = RingSpec::parse_selector(text) {
        let round = RingSpec::parse_selector(&ring.selector()).expect("selector must reparse");
        assert_eq!(ring, round);
    }
});
