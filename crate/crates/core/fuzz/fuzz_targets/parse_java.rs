#![no_main]

use std::path::Path;

use iface_core::java::{parse_source, units_to_decls};
use iface_core::{CodeModel, ExclusionPolicy};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let Ok(unit) = parse_source(&text, Path::new("Fuzz.java")) else {
        return;
    };
    let (decls, _) = units_to_decls(&[unit], &ExclusionPolicy::default());
    // a self-referencing source may form a cycle; that must be an error, not a panic
    let _ = CodeModel::build(decls);
});
