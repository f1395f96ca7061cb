#![no_main]

use iface_core::normalize_signature;
use libfuzzer_sys::fuzz_target;

// name, return type and parameters, one per line
fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let mut lines = text.lines();
    let (Some(name), Some(ret)) = (lines.next(), lines.next()) else {
        return;
    };
    let params: Vec<&str> = lines.collect();
    if let Ok(sig) = normalize_signature(name, ret, &params) {
        let again = normalize_signature(sig.name(), sig.return_type(), sig.params()).expect("normal form parses");
        assert_eq!(sig, again);
    }
});
