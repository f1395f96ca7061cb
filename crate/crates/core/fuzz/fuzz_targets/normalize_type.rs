#![no_main]

use iface_core::signature::{normalize_param, normalize_type};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(ty) = normalize_type(&text) {
        assert_eq!(normalize_type(&ty).as_deref(), Ok(ty.as_str()));
    }
    if let Ok(ty) = normalize_param(&text) {
        assert_eq!(normalize_param(&ty).as_deref(), Ok(ty.as_str()));
    }
});
