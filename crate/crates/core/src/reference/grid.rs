use std::io::{Read, Write};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One periodic axis `[lo, hi)` with `nodes` equispaced points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis<T> {
    pub lo: T,
    pub hi: T,
    pub nodes: usize,
}

impl<T: Real> GridAxis<T> {
    pub fn new(lo: T, hi: T, nodes: usize) -> Self {
        Self { lo, hi, nodes }
    }

    pub fn length(&self) -> T {
        self.hi - self.lo
    }

    pub fn spacing(&self) -> T {
        self.length() / T::from_count(self.nodes)
    }

    pub fn node(&self, i: usize) -> T {
        self.lo + T::from_count(i) * self.spacing()
    }

    /// Momentum of FFT mode `i` (signed wave number scaled by `ε·2π/L`).
    pub fn momentum(&self, i: usize, eps: T) -> T {
        let n = self.nodes as i64;
        let k = if (i as i64) < n / 2 { i as i64 } else { i as i64 - n };
        eps * T::lit(2.0) * T::PI() / self.length() * T::from_i64(k).unwrap()
    }
}

/// Tensor grid of one or two periodic axes. Node counts are even; powers
/// of two are fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec<T> {
    pub axes: Vec<GridAxis<T>>,
    /// Largest admissible `|ψ|` on boundary nodes at `t = 0`.
    pub boundary_tolerance: T,
}

impl<T: Real> GridSpec<T> {
    pub const MIN_NODES: usize = 16;
    pub const DEFAULT_BOUNDARY_TOLERANCE: f64 = 1e-10;

    pub fn new(axes: Vec<GridAxis<T>>) -> Self {
        Self { axes, boundary_tolerance: T::lit(Self::DEFAULT_BOUNDARY_TOLERANCE) }
    }

    /// The same interval and node count on every axis.
    pub fn square(dim: usize, lo: T, hi: T, nodes: usize) -> Self {
        Self::new(vec![GridAxis::new(lo, hi, nodes); dim])
    }

    pub fn with_boundary_tolerance(mut self, tol: T) -> Self {
        self.boundary_tolerance = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.nodes).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Product of the axis spacings.
    pub fn cell_volume(&self) -> T {
        self.axes.iter().fold(T::one(), |acc, a| acc * a.spacing())
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.dim()) {
            return Err(Error::InvalidParameter { name: "grid", reason: format!("supports 1 or 2 axes, got {}", self.dim()) });
        }
        for a in &self.axes {
            if a.nodes < Self::MIN_NODES || a.nodes % 2 != 0 {
                return Err(Error::InvalidParameter {
                    name: "grid.nodes",
                    reason: format!("must be even and at least {}, got {}", Self::MIN_NODES, a.nodes),
                });
            }
            if !(a.hi > a.lo) || !a.lo.is_finite() || !a.hi.is_finite() {
                return Err(Error::InvalidParameter { name: "grid.interval", reason: format!("[{}, {}] is empty", a.lo, a.hi) });
            }
        }
        Ok(())
    }

    /// Multi-index of flat (row-major) position `flat`.
    pub(crate) fn unflatten(&self, flat: usize) -> [usize; 2] {
        match self.dim() {
            1 => [flat, 0],
            _ => [flat / self.axes[1].nodes, flat % self.axes[1].nodes],
        }
    }

    /// Coordinates of node `flat`.
    pub fn point(&self, flat: usize) -> Vec<T> {
        let idx = self.unflatten(flat);
        self.axes.iter().enumerate().map(|(j, a)| a.node(idx[j])).collect()
    }

    /// Whether node `flat` lies on the first or last layer of any axis.
    pub fn on_boundary(&self, flat: usize) -> bool {
        let idx = self.unflatten(flat);
        self.axes.iter().enumerate().any(|(j, a)| idx[j] == 0 || idx[j] == a.nodes - 1)
    }
}

/// Samples of a wave function on a [`GridSpec`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField<T> {
    pub grid: GridSpec<T>,
    pub eps: T,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> WaveField<T> {
    /// `Σ |ψ|² · cell volume`.
    pub fn norm_sqr(&self) -> T {
        let sum: Vec<T> = self.values.iter().map(|v| v.norm_sqr()).collect();
        crate::scalar::pairwise_sum(&sum) * self.grid.cell_volume()
    }

    pub fn boundary_amplitude(&self) -> T {
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.on_boundary(*i))
            .fold(T::zero(), |acc, (_, v)| acc.max(v.norm()))
    }

    /// Binary layout, all little endian: magic `SCWF`, `u32` version 1,
    /// `u32` axis count; per axis `u64` nodes, `f64` lo, `f64` hi; `f64` ε;
    /// then every value as an `(re, im)` pair of `f64`, row-major.
    pub fn write_binary<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        out.write_all(b"SCWF")?;
        out.write_all(&1u32.to_le_bytes())?;
        out.write_all(&(self.grid.dim() as u32).to_le_bytes())?;
        for a in &self.grid.axes {
            out.write_all(&(a.nodes as u64).to_le_bytes())?;
            out.write_all(&a.lo.to_f64_lossy().to_le_bytes())?;
            out.write_all(&a.hi.to_f64_lossy().to_le_bytes())?;
        }
        out.write_all(&self.eps.to_f64_lossy().to_le_bytes())?;
        for v in &self.values {
            out.write_all(&v.re.to_f64_lossy().to_le_bytes())?;
            out.write_all(&v.im.to_f64_lossy().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(input: &mut R) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidParameter { name: "wave field", reason: reason.into() };
        let mut buf4 = [0u8; 4];
        let mut buf8 = [0u8; 8];
        let mut u32_le = |r: &mut R| -> Result<u32> {
            r.read_exact(&mut buf4).map_err(|e| bad(&e.to_string()))?;
            Ok(u32::from_le_bytes(buf4))
        };
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic).map_err(|e| bad(&e.to_string()))?;
        if &magic != b"SCWF" {
            return Err(bad("missing SCWF magic"));
        }
        if u32_le(input)? != 1 {
            return Err(bad("unsupported version"));
        }
        let dim = u32_le(input)? as usize;
        let mut read8 = |r: &mut R| -> Result<[u8; 8]> {
            r.read_exact(&mut buf8).map_err(|e| bad(&e.to_string()))?;
            Ok(buf8)
        };
        let mut axes = Vec::with_capacity(dim);
        for _ in 0..dim {
            let nodes = u64::from_le_bytes(read8(input)?) as usize;
            let lo = f64::from_le_bytes(read8(input)?);
            let hi = f64::from_le_bytes(read8(input)?);
            axes.push(GridAxis::new(T::lit(lo), T::lit(hi), nodes));
        }
        let grid = GridSpec::new(axes);
        grid.validate()?;
        let eps = T::lit(f64::from_le_bytes(read8(input)?));
        let mut values = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            let re = f64::from_le_bytes(read8(input)?);
            let im = f64::from_le_bytes(read8(input)?);
            values.push(Complex::new(T::lit(re), T::lit(im)));
        }
        Ok(Self { grid, eps, values })
    }
}
