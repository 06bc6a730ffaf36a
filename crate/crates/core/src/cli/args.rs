use clap::{Parser, Subcommand, ValueEnum};

use crate::exactmath::ExactScalar;
use crate::experiments::Rounding;
use crate::volumes::IndexReading;

pub const MIN_PRECISION: u32 = 15;
pub const MAX_PRECISION: u32 = 200;

/// Frequencies of separating vs nonseparating simple closed geodesics:
/// exact ratios, asymptotic predictions, sweeps and verification suites.
#[derive(Parser, Debug)]
#[command(name = "geofreq", version)]
pub struct Cli {
    /// Significant decimal digits carried by every real-valued result.
    #[arg(
        long,
        global = true,
        env = "GEOFREQ_PRECISION",
        default_value_t = 30,
        value_parser = clap::value_parser!(u32).range(MIN_PRECISION as i64..=MAX_PRECISION as i64)
    )]
    pub precision: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact ratio, prediction and error term at a single (g, n).
    Ratio {
        #[arg(long, allow_negative_numbers = true)]
        g: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Tabulate a (g, λ) grid; n = round(λ·g).
    Sweep {
        /// `a:b` (step 1), `a:b:+k` (arithmetic) or `a:b:xk` (geometric).
        #[arg(long, value_parser = parse_grid)]
        g: GridArg,
        /// Comma-separated nonnegative rationals, e.g. `0,1/2,2`.
        #[arg(long, value_parser = parse_lambdas)]
        lambda: LambdaArg,
        /// Output path; `-` is standard output.
        #[arg(long, default_value = "-")]
        out: String,
        /// Defaults to json for `*.json` paths and csv otherwise.
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, value_enum, default_value_t = RoundingArg::HalfEven)]
        rounding: RoundingArg,
    },
    /// Run the verification suites; exits nonzero on the first failing check.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Correlator index used by the identity suite (`literal` is a negative control).
        #[arg(long, value_enum, default_value_t = ReadingArg::Balanced, hide = true)]
        index_reading: ReadingArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemmas,
    Identities,
    Convergence,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RoundingArg {
    HalfEven,
    HalfUp,
    Floor,
}

impl From<RoundingArg> for Rounding {
    fn from(r: RoundingArg) -> Self {
        match r {
            RoundingArg::HalfEven => Rounding::HalfEven,
            RoundingArg::HalfUp => Rounding::HalfUp,
            RoundingArg::Floor => Rounding::Floor,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Balanced,
    Literal,
}

impl From<ReadingArg> for IndexReading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::Balanced => IndexReading::Balanced,
            ReadingArg::Literal => IndexReading::Literal,
        }
    }
}

// Newtypes so clap treats each as one value rather than a repeated list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridArg(pub Vec<u32>);

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaArg(pub Vec<ExactScalar>);

fn parse_bound(s: &str, what: &str) -> Result<u32, String> {
    s.trim()
        .parse::<u32>()
        .map_err(|_| format!("{what} `{s}` is not a nonnegative integer"))
}

/// Parses `a`, `a:b`, `a:b:+k` or `a:b:xk` into the listed values `<= b`.
pub fn parse_grid(s: &str) -> Result<GridArg, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let (start, end, step) = match parts.as_slice() {
        [a] => (parse_bound(a, "start")?, parse_bound(a, "start")?, "+1"),
        [a, b] => (parse_bound(a, "start")?, parse_bound(b, "end")?, "+1"),
        [a, b, k] => (parse_bound(a, "start")?, parse_bound(b, "end")?, k.trim()),
        _ => return Err(format!("grid `{s}` must look like a:b, a:b:+k or a:b:xk")),
    };
    if start > end {
        return Err(format!("grid `{s}` has start {start} > end {end}"));
    }
    let mut values = Vec::new();
    if let Some(k) = step.strip_prefix('x') {
        let k = parse_bound(k, "factor")?;
        if k < 2 {
            return Err(format!("geometric factor in `{s}` must be >= 2"));
        }
        if start == 0 {
            return Err(format!("geometric grid `{s}` cannot start at 0"));
        }
        let mut v = start;
        while v <= end {
            values.push(v);
            match v.checked_mul(k) {
                Some(next) => v = next,
                None => break,
            }
        }
    } else {
        let k = step.strip_prefix('+').unwrap_or(step);
        let k = parse_bound(k, "step")?;
        if k == 0 {
            return Err(format!("arithmetic step in `{s}` must be >= 1"));
        }
        values.extend((start..=end).step_by(k as usize));
    }
    Ok(GridArg(values))
}

pub fn parse_lambdas(s: &str) -> Result<LambdaArg, String> {
    let values = s
        .split(',')
        .map(|item| {
            item.trim()
                .parse::<ExactScalar>()
                .map_err(|e| format!("lambda `{}`: {e}", item.trim()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LambdaArg(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("4:64:x2").unwrap().0, vec![4, 8, 16, 32, 64]);
        assert_eq!(parse_grid("4:70:x2").unwrap().0, vec![4, 8, 16, 32, 64]);
        assert_eq!(parse_grid("2:10:+3").unwrap().0, vec![2, 5, 8]);
        assert_eq!(parse_grid("2:5").unwrap().0, vec![2, 3, 4, 5]);
        assert_eq!(parse_grid("2:2").unwrap().0, vec![2]);
        assert_eq!(parse_grid("7").unwrap().0, vec![7]);
        assert_eq!(parse_grid("3:3000000000:x3").unwrap().0.len(), 19);
        for bad in ["5:2", "2:8:x1", "0:8:x2", "2:8:+0", "a:3", "1:2:3:4", "2:8:y2"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lambda_list() {
        let l = parse_lambdas("0, 1/2,2,0.25").unwrap().0;
        let expected: Vec<ExactScalar> = ["0", "1/2", "2", "1/4"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(l, expected);
        assert!(parse_lambdas("1,,2").is_err());
        assert!(parse_lambdas("x").is_err());
    }

    #[test]
    fn precision_range_enforced() {
        Cli::command().debug_assert();
        let ok = Cli::try_parse_from(["geofreq", "--precision", "15", "ratio", "--g", "3", "--n", "0"]);
        assert_eq!(ok.unwrap().precision, 15);
        for bad in ["14", "201", "abc"] {
            let r = Cli::try_parse_from(["geofreq", "--precision", bad, "ratio", "--g", "3", "--n", "0"]);
            assert!(r.is_err(), "{bad}");
        }
    }
}
