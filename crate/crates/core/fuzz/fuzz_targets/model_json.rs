#![no_main]

use iface_core::model_json::{model_to_json, parse_model_json};
use iface_core::CodeModel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(decls) = parse_model_json(text) else {
        return;
    };
    let Ok(model) = CodeModel::build(decls) else {
        return;
    };
    let out = model_to_json(model.types());
    let back = CodeModel::build(parse_model_json(&out).expect("own output parses")).expect("own output builds");
    assert_eq!(back, model);
});
