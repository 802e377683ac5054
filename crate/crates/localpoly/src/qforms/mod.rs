//! Integral binary quadratic forms, the level-N genus character, and the two
//! enumeration engines for forms whose root interval contains a rational.

mod cache;
mod enumerate;
mod form;
mod genus;

pub use cache::{cache_dir, simple_forms_cached, SIMPLE_FORM_CACHE_ENV};
pub use enumerate::{
    enumerate_simple_forms, enumerate_straddling_fast, enumerate_straddling_oracle,
    for_each_straddling, straddles, RationalPoint, StraddlingQuery, Transported,
};
pub use form::{GL2Matrix, QuadForm};
pub use genus::GenusCharacter;
