#![no_main]

use kantorovich::{Rational, Scalar};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if text.len() > 256 {
        return;
    }
    if let Ok(q) = Rational::parse(text) {
        let again = Rational::parse(&q.render()).expect("canonical form parses");
        assert_eq!(q, again);
    }
    if let Ok(x) = f64::parse(text) {
        assert!(x.is_finite());
        assert_eq!(f64::parse(&x.render()).expect("rendered float parses"), x);
    }
});
