//! Reproduction of the two benchmark economies: σ(k), and `f` against its
//! Cobb-Douglas limit near zero and near infinity.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::asymptotics::{limit_function_at_infinity, limit_function_at_zero};
use crate::elasticity::sigma_scan;
use crate::error::Result;
use crate::format::num;
use crate::grid::Grid;
use crate::params::ValidatedParams;
use crate::svg::{self, Chart, Series};

pub const SIGMA_RANGE: (f64, f64, usize) = (1e-6, 1e6, 601);
pub const SMALL_RANGE: (f64, f64, usize) = (1e-3, 10.0, 200);
pub const LARGE_RANGE: (f64, f64, usize) = (10.0, 1e4, 200);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    One,
    Two,
}

impl Case {
    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Case::One),
            2 => Some(Case::Two),
            _ => None,
        }
    }

    pub fn id(&self) -> u8 {
        match self {
            Case::One => 1,
            Case::Two => 2,
        }
    }

    pub fn params(&self) -> ValidatedParams {
        match self {
            Case::One => ValidatedParams::case1(),
            Case::Two => ValidatedParams::case2(),
        }
    }
}

/// Which benchmark to draw; each produces six files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureSpec {
    pub case: Case,
}

impl FigureSpec {
    pub fn file_names(&self) -> [String; 6] {
        let n = self.case.id();
        [
            format!("sigma_case{n}.csv"),
            format!("sigma_case{n}.svg"),
            format!("compare_small_case{n}.csv"),
            format!("compare_small_case{n}.svg"),
            format!("compare_large_case{n}.csv"),
            format!("compare_large_case{n}.svg"),
        ]
    }
}

fn csv(header: &str, x: &[f64], columns: &[&[f64]]) -> String {
    let mut out = format!("{header}\n");
    for (i, k) in x.iter().enumerate() {
        out.push_str(&num(*k));
        for col in columns {
            out.push(',');
            out.push_str(&num(col[i]));
        }
        out.push('\n');
    }
    out
}

fn write(dir: &Path, name: &str, body: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut file = fs::File::create(&path)?;
    file.write_all(body.as_bytes())?;
    Ok(path)
}

/// Writes the six files for `spec` into `outdir` and returns their paths.
pub fn emit_figures(spec: &FigureSpec, outdir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(outdir)?;
    let p = spec.case.params();
    let n = spec.case.id();
    let names = spec.file_names();
    let mut written = Vec::with_capacity(6);

    let (lo, hi, pts) = SIGMA_RANGE;
    let sigma = sigma_scan(&p, &Grid::log(lo, hi, pts)?)?;
    written.push(write(
        outdir,
        &names[0],
        &csv("k,sigma", &sigma.grid, &[&sigma.sigma]),
    )?);
    let title = format!("Elasticity of substitution, case {n}");
    let chart = Chart {
        title: &title,
        x_label: "k",
        y_label: "sigma(k)",
        x: &sigma.grid,
        series: vec![Series {
            label: "sigma",
            y: &sigma.sigma,
        }],
        log_y: false,
    };
    written.push(write(outdir, &names[1], &svg::render(&chart))?);

    let limit_name = if p.psi() > 0.0 { "g1" } else { "g2" };
    let (lo, hi, pts) = SMALL_RANGE;
    let ks = Grid::log(lo, hi, pts)?.values();
    let f = ks.iter().map(|&k| p.f(k)).collect::<Result<Vec<_>>>()?;
    let lim = ks
        .iter()
        .map(|&k| limit_function_at_zero(&p, k))
        .collect::<Result<Vec<_>>>()?;
    written.push(write(
        outdir,
        &names[2],
        &csv("k,f,limit_zero", &ks, &[&f, &lim]),
    )?);
    let title = format!("f and its small-k limit {limit_name}, case {n}");
    let chart = Chart {
        title: &title,
        x_label: "k",
        y_label: "output per worker",
        x: &ks,
        series: vec![
            Series { label: "f", y: &f },
            Series {
                label: limit_name,
                y: &lim,
            },
        ],
        log_y: true,
    };
    written.push(write(outdir, &names[3], &svg::render(&chart))?);

    let limit_name = if p.psi() > 0.0 { "f1" } else { "f2" };
    let (lo, hi, pts) = LARGE_RANGE;
    let ks = Grid::log(lo, hi, pts)?.values();
    let f = ks.iter().map(|&k| p.f(k)).collect::<Result<Vec<_>>>()?;
    let lim = ks
        .iter()
        .map(|&k| limit_function_at_infinity(&p, k))
        .collect::<Result<Vec<_>>>()?;
    written.push(write(
        outdir,
        &names[4],
        &csv("k,f,limit_inf", &ks, &[&f, &lim]),
    )?);
    let title = format!("f and its large-k limit {limit_name}, case {n}");
    let chart = Chart {
        title: &title,
        x_label: "k",
        y_label: "output per worker",
        x: &ks,
        series: vec![
            Series { label: "f", y: &f },
            Series {
                label: limit_name,
                y: &lim,
            },
        ],
        log_y: true,
    };
    written.push(write(outdir, &names[5], &svg::render(&chart))?);
    Ok(written)
}
