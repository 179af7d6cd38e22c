//! Fuzzes the JSON group-spec parser: arbitrary input must either parse into
//! a validated group or fail with an error, never panic.  Accepted specs are
//! additionally exercised through the cheap group accessors.

#![no_main]

use libfuzzer_sys::fuzz_target;
use nervecoh::spec_io::parse_group_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(loaded) = parse_group_spec(text) {
        let group = loaded.group();
        let order = group.order();
        assert!(order >= 1);
        // The identity law holds on whatever was accepted.
        let e = group.identity();
        for x in group.elements() {
            assert_eq!(group.mul(e, x), x);
            assert_eq!(group.mul(x, group.inv(x)), e);
        }
        let _ = loaded.describe();
    }
});
