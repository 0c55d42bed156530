//! Published error tables for the five benchmark problems, frozen as constants.
//!
//! `errors` holds the printed columns in order: for Table 1 the collocation, Tau and
//! Galerkin errors; for Table 2 the third-party comparison error and the
//! collocation error.
#![allow(clippy::approx_constant)]

use crate::error::{Error, Result};
use crate::schemes::SchemeKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub x: f64,
    /// Exact value as printed (truncated to 7 decimals).
    pub exact: f64,
    pub errors: &'static [f64],
}

/// A printed error column and the tolerance an achieved run must meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Column {
    pub scheme: SchemeKind,
    /// Index into [`ReferenceRow::errors`].
    pub column: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCase {
    pub example: usize,
    pub eta: usize,
    pub rows: &'static [ReferenceRow],
    pub columns: &'static [Column],
    /// Label of the third-party column, if any.
    pub comparison: Option<&'static str>,
}

const fn row(x: f64, exact: f64, errors: &'static [f64]) -> ReferenceRow {
    ReferenceRow { x, exact, errors }
}

pub const TABLE1_EXAMPLE1: &[ReferenceRow] = &[
    row(0.1, 0.0025015, &[1.3701e-12, 9.4083e-07, 4.1019e-05]),
    row(0.2, 0.0100250, &[9.0015e-13, 3.9899e-07, 7.1956e-05]),
    row(0.3, 0.0226275, &[1.1882e-12, 5.3283e-08, 8.3708e-05]),
    row(0.4, 0.0404054, &[1.4496e-12, 4.7147e-07, 9.2989e-05]),
    row(0.5, 0.0634973, &[1.5533e-12, 1.0288e-06, 1.0235e-04]),
    row(0.6, 0.0920878, &[2.0826e-12, 8.6287e-07, 1.0947e-04]),
    row(0.7, 0.1264121, &[8.8321e-13, 2.4217e-07, 1.1425e-04]),
    row(0.8, 0.1667632, &[7.3194e-13, 9.5880e-08, 1.1836e-04]),
    row(0.9, 0.2135007, &[1.8588e-12, 1.9422e-07, 1.2276e-04]),
    row(1.0, 0.2670627, &[9.3192e-13, 7.7329e-07, 1.2706e-04]),
];

pub const TABLE1_EXAMPLE2: &[ReferenceRow] = &[
    row(0.1, 0.0983631, &[1.7106e-04, 1.7790e-03, 2.0126e-04]),
    row(0.2, 0.1870978, &[3.9765e-04, 6.3775e-04, 3.4647e-04]),
    row(0.3, 0.2575181, &[1.2307e-04, 2.6134e-03, 5.0466e-04]),
    row(0.4, 0.3027306, &[3.6135e-04, 2.6338e-03, 5.4599e-04]),
    row(0.5, 0.3183098, &[5.9103e-04, 1.0177e-03, 4.0975e-04]),
    row(0.6, 0.3027306, &[3.6135e-04, 1.1302e-03, 1.5710e-04]),
    row(0.7, 0.2575181, &[1.2307e-04, 2.6834e-03, 8.3777e-05]),
    row(0.8, 0.1870978, &[3.9765e-04, 2.9582e-03, 2.0029e-04]),
    row(0.9, 0.0983631, &[1.7106e-04, 1.8955e-03, 1.5510e-04]),
];

pub const TABLE2_EXAMPLE3: &[ReferenceRow] = &[
    row(0.01, -0.0000009, &[5.7e-08, 5.5603e-16]),
    row(0.10, -0.0009000, &[8.4e-08, 6.3881e-16]),
    row(0.50, -0.0625000, &[2.2e-06, 1.8318e-15]),
    row(1.00, 0.0000000, &[8.2e-07, 2.7755e-15]),
    row(2.00, 8.0000000, &[1.7e-07, 1.7763e-15]),
];

pub const TABLE2_EXAMPLE4: &[ReferenceRow] = &[
    row(0.1, 0.9900498, &[4.8e-06, 3.3306e-16]),
    row(0.2, 0.9607894, &[6.8e-06, 3.3306e-16]),
    row(0.3, 0.9139311, &[8.0e-07, 3.3306e-16]),
    row(0.4, 0.8521437, &[8.3e-06, 3.3306e-16]),
    row(0.5, 0.7788007, &[1.2e-05, 2.2204e-16]),
    row(0.6, 0.6976763, &[5.3e-05, 1.1102e-16]),
    row(0.7, 0.6126263, &[2.0e-04, 1.1102e-16]),
    row(0.8, 0.5272924, &[5.9e-04, 2.2204e-16]),
    row(0.9, 0.4448580, &[1.4e-03, 5.5511e-17]),
    row(1.0, 0.3678794, &[3.0e-03, 5.6511e-17]),
];

pub const TABLE2_EXAMPLE5: &[ReferenceRow] = &[
    row(0.01, 1.0001000, &[2.2e-08, 4.4408e-16]),
    row(0.02, 1.0004000, &[1.5e-08, 2.2204e-16]),
    row(0.05, 1.0025031, &[2.1e-08, 2.2204e-16]),
    row(0.1, 1.0100501, &[1.7e-08, 4.4408e-16]),
    row(0.2, 1.0408107, &[2.1e-08, 4.4408e-16]),
    row(0.5, 1.2840254, &[3.0e-08, 4.4408e-16]),
    row(0.7, 1.6323162, &[4.2e-08, 6.6613e-16]),
    row(0.8, 1.8964808, &[5.1e-08, 2.2204e-16]),
    row(0.9, 2.2479079, &[9.2e-08, 4.4408e-16]),
    row(1.0, 2.7182818, &[8.8e-08, 8.8817e-16]),
];

const fn col(scheme: SchemeKind, column: usize, tolerance: f64) -> Column {
    Column { scheme, column, tolerance }
}

const EXAMPLE1_COLUMNS: &[Column] = &[
    col(SchemeKind::Collocation, 0, 1e-10),
    col(SchemeKind::Tau, 1, 1e-5),
    col(SchemeKind::Galerkin, 2, 5e-4),
];

const EXAMPLE2_COLUMNS: &[Column] = &[
    col(SchemeKind::Collocation, 0, 5e-3),
    col(SchemeKind::Tau, 1, 3e-2),
    col(SchemeKind::Galerkin, 2, 5e-3),
];

const TABLE2_COLUMNS: &[Column] = &[col(SchemeKind::Collocation, 1, 1e-8)];

pub const TABLE1: &[ReferenceCase] = &[
    ReferenceCase {
        example: 1,
        eta: 12,
        rows: TABLE1_EXAMPLE1,
        columns: EXAMPLE1_COLUMNS,
        comparison: None,
    },
    ReferenceCase {
        example: 2,
        eta: 6,
        rows: TABLE1_EXAMPLE2,
        columns: EXAMPLE2_COLUMNS,
        comparison: None,
    },
];

pub const TABLE2: &[ReferenceCase] = &[
    ReferenceCase {
        example: 3,
        eta: 5,
        rows: TABLE2_EXAMPLE3,
        columns: TABLE2_COLUMNS,
        comparison: Some("HFC"),
    },
    ReferenceCase {
        example: 4,
        eta: 3,
        rows: TABLE2_EXAMPLE4,
        columns: TABLE2_COLUMNS,
        comparison: Some("LWM"),
    },
    ReferenceCase {
        example: 5,
        eta: 3,
        rows: TABLE2_EXAMPLE5,
        columns: TABLE2_COLUMNS,
        comparison: Some("HFC"),
    },
];

pub fn cases(table: usize) -> Result<&'static [ReferenceCase]> {
    match table {
        1 => Ok(TABLE1),
        2 => Ok(TABLE2),
        other => Err(Error::Config(format!("unknown table {other}; expected 1 or 2"))),
    }
}
