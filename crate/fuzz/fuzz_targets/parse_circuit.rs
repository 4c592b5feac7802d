#![no_main]

use libfuzzer_sys::fuzz_target;
use qfloor::Circuit;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = text.parse::<Circuit>() {
        let again: Circuit = c.to_string().parse().expect("display output must parse");
        assert_eq!(c, again);
        if c.num_qubits() <= 10 {
            let state = c.simulate().expect("parsed circuit must simulate");
            assert!((state.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }
});
