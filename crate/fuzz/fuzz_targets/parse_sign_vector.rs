#![no_main]

use libfuzzer_sys::fuzz_target;
use qfloor::eval::Mode;
use qfloor::SignVector;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = text.parse::<SignVector>() {
        let again: SignVector = v.to_string().parse().expect("display output must parse");
        assert_eq!(v, again);
        let bits = v.to_bitstring();
        assert_eq!(SignVector::from_bitstring(&bits).unwrap(), v);
    }
    if let Ok(mode) = text.parse::<Mode>() {
        assert_eq!(mode.to_string().parse::<Mode>().unwrap(), mode);
    }
});
