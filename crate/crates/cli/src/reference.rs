//! Published values for the benchmark tables, kept as the printed strings so
//! the display precision of every cell is known. Only the columns for the
//! GDQ/BDF2 scheme and the exact solution are kept.

pub const REFERENCE_VERSION: u32 = 1;

/// Table 1: case 1, sigma = 2, N = 40, dt = 1e-4, T = 1e-3.
pub mod table1 {
    pub const X: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    pub const RE1_SCHEME: [&str; 9] = [
        "0.653544", "1.305533", "1.949363", "2.565927", "3.110739", "3.492873", "3.549602", "3.050145", "1.816672",
    ];
    pub const RE1_EXACT: [&str; 9] = [
        "0.653545", "1.305534", "1.949364", "2.565927", "3.110739", "3.492871", "3.549594", "3.050130", "1.816658",
    ];
    pub const RE10_SCHEME: [&str; 9] = [
        "0.065749761",
        "0.131382943",
        "0.196280911",
        "0.258575994",
        "0.313849356",
        "0.352972354",
        "0.359442750",
        "0.309579979",
        "0.184753526",
    ];
    pub const RE10_EXACT: [&str; 9] = [
        "0.065749761",
        "0.131382943",
        "0.196280911",
        "0.258575995",
        "0.313849356",
        "0.352972351",
        "0.359442742",
        "0.309579963",
        "0.184753511",
    ];
    /// (Re, L2, L∞)
    pub const NORMS: [(f64, &str, &str); 2] = [(1.0, "6.66E-06", "1.60E-05"), (10.0, "7.13E-09", "1.73E-08")];
}

/// Table 2: case 1, sigma = 100, T = 1, dt = 0.01. (N, Re, L2, L∞)
pub const TABLE2: [(usize, f64, &str, &str); 8] = [
    (10, 100.0, "2.3494E-10", "3.9698E-10"),
    (20, 100.0, "2.3486E-10", "3.9784E-10"),
    (40, 100.0, "2.3486E-10", "3.9784E-10"),
    (80, 100.0, "2.3486E-10", "3.9856E-10"),
    (10, 200.0, "3.161E-11", "5.303E-11"),
    (20, 200.0, "3.155E-11", "5.342E-11"),
    (40, 200.0, "3.155E-11", "5.347E-11"),
    (80, 200.0, "3.155E-11", "5.355E-11"),
];

/// Table 3: case 1, sigma = 2, dt = 1e-3.
/// (T, Re, N=20 L2, N=20 L∞, N=32 L2, N=32 L∞)
pub const TABLE3: [(f64, f64, &str, &str, &str, &str); 8] = [
    (0.1, 10.0, "3.6018E-07", "8.1267E-07", "3.6020E-07", "8.1808E-07"),
    (0.1, 100.0, "6.6321E-10", "1.5636E-09", "6.6393E-10", "1.5970E-09"),
    (0.1, 10000.0, "3.5865E-14", "1.4146E-13", "7.1838E-16", "1.7435E-15"),
    (0.1, 100000.0, "4.1011E-16", "1.6284E-15", "8.1422E-19", "2.0939E-18"),
    (0.5, 10.0, "6.2788E-08", "1.2138E-07", "6.2787E-08", "1.2158E-07"),
    (0.5, 100.0, "4.9320E-10", "1.1375E-09", "4.9473E-10", "1.1514E-09"),
    (0.5, 10000.0, "1.0714E-13", "4.0785E-13", "7.0998E-16", "1.7148E-15"),
    (0.5, 100000.0, "1.9304E-15", "7.6459E-15", "3.3693E-18", "1.1923E-17"),
];

/// Table 4: case 2, Re = 100, dt = 1e-3.
/// (x, t, N=40 value, N=80 value, exact, N=80 absolute error)
pub const TABLE4: [(f64, f64, &str, &str, &str, &str); 15] = [
    (0.25, 0.4, "0.36226", "0.36226", "0.36226", "9.9E-8"),
    (0.25, 0.6, "0.28204", "0.28204", "0.28204", "7.0E-8"),
    (0.25, 0.8, "0.23045", "0.23045", "0.23045", "4.6E-8"),
    (0.25, 1.0, "0.19469", "0.19469", "0.19469", "3.2E-8"),
    (0.25, 3.0, "0.07613", "0.07613", "0.07613", "4.7E-9"),
    (0.5, 0.4, "0.68369", "0.68369", "0.68368", "1.2E-7"),
    (0.5, 0.6, "0.54832", "0.54832", "0.54832", "1.7E-7"),
    (0.5, 0.8, "0.45372", "0.45371", "0.45371", "1.4E-7"),
    (0.5, 1.0, "0.38568", "0.38568", "0.38568", "9.7E-8"),
    (0.5, 3.0, "0.15218", "0.15218", "0.15218", "1.1E-8"),
    (0.75, 0.4, "0.92050", "0.92050", "0.92050", "2.5E-7"),
    (0.75, 0.6, "0.78299", "0.78299", "0.78299", "4.3E-7"),
    (0.75, 0.8, "0.66272", "0.66272", "0.66272", "3.2E-7"),
    (0.75, 1.0, "0.56932", "0.56932", "0.56932", "2.2E-7"),
    (0.75, 3.0, "0.22774", "0.22774", "0.22774", "1.9E-8"),
];

/// Table 5: case 2, dt = 1e-3, N = 80. (T, nu, L2, L∞)
pub const TABLE5: [(f64, f64, &str, &str); 9] = [
    (5.0, 0.005, "2.875E-09", "5.419E-09"),
    (5.0, 0.002, "1.764E-08", "5.931E-08"),
    (5.0, 0.0001, "0.08022", "0.29237"),
    (10.0, 0.005, "5.180E-10", "9.913E-10"),
    (10.0, 0.002, "2.577E-09", "3.938E-09"),
    (10.0, 0.0001, "6.029E-07", "1.246E-06"),
    (15.0, 0.005, "1.986E-10", "3.762E-10"),
    (15.0, 0.002, "1.854E-09", "3.296E-09"),
    (15.0, 0.0001, "2.386E-07", "5.058E-07"),
];

/// Table 6: 2D, Re = 20, 16x16, dt = 1e-3; absolute errors.
/// (x, y, T=0.5, T=0.75, T=1.0)
pub const TABLE6: [(f64, f64, &str, &str, &str); 9] = [
    (0.125, 0.125, "4.50E-06", "1.64E-06", "3.37E-07"),
    (0.125, 0.5, "4.92E-06", "3.40E-06", "8.56E-07"),
    (0.125, 0.875, "9.41E-07", "1.45E-06", "3.85E-06"),
    (0.5, 0.125, "4.92E-06", "3.40E-06", "8.56E-07"),
    (0.5, 0.5, "5.60E-07", "2.01E-08", "6.11E-06"),
    (0.5, 0.875, "4.46E-08", "5.91E-07", "7.69E-07"),
    (0.875, 0.125, "9.41E-07", "1.45E-06", "3.85E-06"),
    (0.875, 0.5, "4.46E-08", "5.91E-07", "7.69E-07"),
    (0.875, 0.875, "3.26E-09", "8.71E-09", "3.21E-07"),
];

/// Table 7: 2D, Re = 1. (T, grid, dt, L2, L∞)
pub const TABLE7: [(f64, usize, f64, &str, &str); 6] = [
    (0.05, 5, 0.005, "4.375E-07", "5.855E-07"),
    (0.05, 10, 0.0005, "4.775E-09", "4.492E-09"),
    (0.05, 15, 0.0001, "2.407E-10", "1.887E-10"),
    (0.25, 5, 0.005, "2.909E-07", "4.057E-07"),
    (0.25, 10, 0.0005, "2.379E-10", "2.160E-10"),
    (0.25, 15, 0.0001, "1.207E-11", "8.888E-12"),
];

/// Table 8: 2D, 16x16, dt = 5e-4. (T, Re, L2, L∞)
pub const TABLE8: [(f64, f64, &str, &str); 9] = [
    (3.0, 10.0, "3.18E-09", "3.52E-09"),
    (3.0, 100.0, "3.11E-06", "3.84E-06"),
    (3.0, 200.0, "1.56E-04", "2.46E-04"),
    (5.0, 10.0, "1.29E-13", "1.31E-13"),
    (5.0, 100.0, "1.35E-12", "1.26E-12"),
    (5.0, 200.0, "1.93E-09", "2.34E-09"),
    (10.0, 10.0, "3.08E-13", "3.86E-13"),
    (10.0, 100.0, "7.59E-13", "8.10E-13"),
    (10.0, 200.0, "9.52E-13", "9.54E-13"),
];

/// Table 9: coupled, Re = 100, N = 20, dt = 1e-3; u component. (T, L2, L∞)
pub const TABLE9: [(f64, &str, &str); 4] = [
    (0.5, "1.3078E-05", "1.0721E-05"),
    (1.0, "1.0779E-05", "8.3286E-06"),
    (2.0, "1.0823E-05", "9.0187E-06"),
    (4.0, "7.3885E-08", "8.4375E-08"),
];

/// Tables 10 (u) and 11 (v): coupled, Re = 100, 20x20, dt = 1e-3.
/// (x, y, T=0.5 scheme, T=0.5 exact, T=2 scheme, T=2 exact)
pub type PointRow = (f64, f64, &'static str, &'static str, &'static str, &'static str);

pub const TABLE10: [PointRow; 13] = [
    (0.1, 0.1, "0.54332", "0.54332", "0.50048", "0.50048"),
    (0.5, 0.1, "0.50035", "0.50035", "0.50000", "0.50000"),
    (0.9, 0.1, "0.50000", "0.50000", "0.50000", "0.50000"),
    (0.3, 0.3, "0.54338", "0.54338", "0.50048", "0.50048"),
    (0.7, 0.3, "0.50035", "0.50035", "0.50000", "0.50000"),
    (0.1, 0.5, "0.74222", "0.74221", "0.55568", "0.55568"),
    (0.5, 0.5, "0.54332", "0.54332", "0.50048", "0.50048"),
    (0.9, 0.5, "0.50035", "0.50035", "0.50000", "0.50000"),
    (0.3, 0.7, "0.74223", "0.74223", "0.55577", "0.55577"),
    (0.7, 0.7, "0.54338", "0.54338", "0.50048", "0.50048"),
    (0.1, 0.9, "0.74995", "0.74995", "0.74426", "0.74426"),
    (0.5, 0.9, "0.74221", "0.74221", "0.55568", "0.55568"),
    (0.9, 0.9, "0.543324", "0.543325", "0.50048", "0.50048"),
];

pub const TABLE11: [PointRow; 13] = [
    (0.1, 0.1, "0.95668", "0.95668", "0.99952", "0.99952"),
    (0.5, 0.1, "0.99965", "0.99965", "1.00000", "1.00000"),
    (0.9, 0.1, "1.00000", "1.00000", "1.00000", "1.00000"),
    (0.3, 0.3, "0.95662", "0.95662", "0.99952", "0.99952"),
    (0.7, 0.3, "0.99965", "0.99965", "1.00000", "1.00000"),
    (0.1, 0.5, "0.75778", "0.75779", "0.94433", "0.94432"),
    (0.5, 0.5, "0.95668", "0.95668", "0.99952", "0.99952"),
    (0.9, 0.5, "0.99965", "0.99965", "1.00000", "1.00000"),
    (0.3, 0.7, "0.75777", "0.75777", "0.94423", "0.94423"),
    (0.7, 0.7, "0.95662", "0.95662", "0.99952", "0.99952"),
    (0.1, 0.9, "0.75005", "0.75005", "0.75574", "0.75574"),
    (0.5, 0.9, "0.75779", "0.75779", "0.94432", "0.94432"),
    (0.9, 0.9, "0.956674", "0.956675", "0.99986", "0.99986"),
];

/// Unit in the last printed place, e.g. `1e-5` for `"0.54332"` and
/// `1e-8` for `"9.9E-8"`.
pub fn display_unit(text: &str) -> f64 {
    let (mantissa, exp) = match text.find(['E', 'e']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().unwrap_or(0)),
        None => (text, 0),
    };
    let decimals = mantissa.find('.').map_or(0, |i| mantissa.len() - i - 1) as i32;
    10f64.powi(exp - decimals)
}

/// `value` rounded the way `like` is printed.
pub fn format_like(value: f64, like: &str) -> String {
    let scientific = like.contains(['E', 'e']);
    let mantissa = like.split(['E', 'e']).next().unwrap_or(like);
    let decimals = mantissa.find('.').map_or(0, |i| mantissa.len() - i - 1);
    if scientific {
        format!("{value:.decimals$E}")
    } else {
        format!("{value:.decimals$}")
    }
}
