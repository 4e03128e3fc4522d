//! CSV and human-readable renderings. JSON goes straight through serde.
//!
//! CSV columns:
//! - params: `lambda,k,alpha_radians,theta_radians,cos_theta_check,status`
//! - simulate: `mode,n,dim,target_count,lambda,k,alpha,theta,consistent,
//!   theta_residual,oracle_calls,success_probability,norm,target_re,target_im,
//!   non_target_re,non_target_im,amplitude_spread,wall_time_seconds`; with
//!   `--full`, a blank line and then `index,re,im` rows
//! - verify: `suite,check,passed,residual,tol`
//! - golden: `check,passed,residual,tol`, a blank line, then
//!   `matrix,row,col,re,im`

use std::fmt::Write;

use grover_decomp::golden::ComplexRepr;
use grover_decomp::Check;

use crate::commands::{GoldenReport, ParamsReport, SimulateReport, VerifyReport};

pub trait Render {
    fn csv(&self) -> String;
    fn pretty(&self) -> String;
}

fn fmt_complex(z: &ComplexRepr) -> String {
    if z.im < 0.0 {
        format!("{:.15} - {:.15}i", z.re, -z.im)
    } else {
        format!("{:.15} + {:.15}i", z.re, z.im)
    }
}

fn pretty_check(out: &mut String, indent: &str, c: &Check) {
    let _ = writeln!(
        out,
        "{indent}{} {:<36} {:.3e} (tol {:.0e})",
        if c.passed { "ok  " } else { "FAIL" },
        c.name,
        c.residual,
        c.tol
    );
}

impl Render for ParamsReport {
    fn csv(&self) -> String {
        format!(
            "lambda,k,alpha_radians,theta_radians,cos_theta_check,status\n{},{},{},{},{},{}\n",
            self.lambda, self.k, self.alpha_radians, self.theta_radians, self.cos_theta_check, self.status
        )
    }

    fn pretty(&self) -> String {
        format!(
            "lambda           {}\nk                {}\nalpha (rad)      {:.12}\ntheta (rad)      {:.12}\ncos theta check  {:.3e}\nstatus           {}\n",
            self.lambda, self.k, self.alpha_radians, self.theta_radians, self.cos_theta_check, self.status
        )
    }
}

impl Render for SimulateReport {
    fn csv(&self) -> String {
        let (ntr, nti) = match &self.non_target_amplitude {
            Some(z) => (z.re.to_string(), z.im.to_string()),
            None => (String::new(), String::new()),
        };
        let mut out = String::from(
            "mode,n,dim,target_count,lambda,k,alpha,theta,consistent,theta_residual,oracle_calls,\
             success_probability,norm,target_re,target_im,non_target_re,non_target_im,\
             amplitude_spread,wall_time_seconds\n",
        );
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.mode,
            self.n,
            self.dim,
            self.target_count,
            self.lambda,
            self.k,
            self.alpha,
            self.theta,
            self.consistent,
            self.theta_residual,
            self.oracle_calls,
            self.success_probability,
            self.norm,
            self.target_amplitude.re,
            self.target_amplitude.im,
            ntr,
            nti,
            self.amplitude_spread,
            self.wall_time_seconds
        );
        if let Some(amps) = &self.amplitudes {
            out.push_str("\nindex,re,im\n");
            for (i, z) in amps.iter().enumerate() {
                let _ = writeln!(out, "{i},{},{}", z.re, z.im);
            }
        }
        out
    }

    fn pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode                 {}", self.mode);
        let _ = writeln!(out, "register             n = {}, N = {}", self.n, self.dim);
        match &self.targets {
            Some(t) if t.len() <= 16 => {
                let _ = writeln!(out, "targets              {t:?}");
            }
            _ => {
                let _ = writeln!(out, "targets              {} marked", self.target_count);
            }
        }
        let _ = writeln!(out, "k, alpha, theta      {}, {:.12}, {:.12}", self.k, self.alpha, self.theta);
        if !self.consistent {
            let _ = writeln!(out, "                     theta INCONSISTENT (residual {:.3e})", self.theta_residual);
        }
        let _ = writeln!(out, "oracle calls         {}", self.oracle_calls);
        let _ = writeln!(out, "success probability  {:.15}", self.success_probability);
        let _ = writeln!(out, "norm                 {:.15}", self.norm);
        let _ = writeln!(out, "target amplitude     {}", fmt_complex(&self.target_amplitude));
        if let Some(z) = &self.non_target_amplitude {
            let _ = writeln!(out, "non-target amplitude {}", fmt_complex(z));
        }
        let _ = writeln!(out, "wall time            {:.6} s", self.wall_time_seconds);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        if let Some(amps) = &self.amplitudes {
            for (i, z) in amps.iter().enumerate() {
                let _ = writeln!(out, "  [{i:>6}] {}", fmt_complex(z));
            }
        }
        out
    }
}

impl Render for VerifyReport {
    fn csv(&self) -> String {
        let mut out = String::from("suite,check,passed,residual,tol\n");
        for s in &self.suites {
            for c in &s.checks {
                let _ = writeln!(out, "{},{},{},{},{}", s.suite, c.name, c.passed, c.residual, c.tol);
            }
        }
        out
    }

    fn pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {}, {} identity cases", self.seed, self.cases);
        if let Some(f) = self.fault {
            let _ = writeln!(out, "fault injected: {f:?}");
        }
        for s in &self.suites {
            let _ = writeln!(
                out,
                "{} {} ({} cases)",
                if s.passed { "PASS" } else { "FAIL" },
                s.suite,
                s.cases
            );
            for c in &s.checks {
                pretty_check(&mut out, "    ", c);
            }
        }
        let _ = writeln!(out, "{}", if self.passed { "all suites passed" } else { "verification FAILED" });
        out
    }
}

impl Render for GoldenReport {
    fn csv(&self) -> String {
        let mut out = String::from("check,passed,residual,tol\n");
        for c in &self.checks {
            let _ = writeln!(out, "{},{},{},{}", c.name, c.passed, c.residual, c.tol);
        }
        out.push_str("\nmatrix,row,col,re,im\n");
        for (name, data, cols) in [
            ("shortcut_c8", &self.shortcut_c8, 8),
            ("kernel_squared_8", &self.kernel_squared_8, 8),
            ("final_state_8", &self.final_state_8, 1),
        ] {
            for (i, z) in data.iter().enumerate() {
                let _ = writeln!(out, "{name},{},{},{},{}", i / cols, i % cols, z.re, z.im);
            }
        }
        out
    }

    fn pretty(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            pretty_check(&mut out, "", c);
        }
        for (name, data, cols) in [
            ("shortcut C_8", &self.shortcut_c8, 8),
            ("kernel squared G_8^2", &self.kernel_squared_8, 8),
            ("final state", &self.final_state_8, 1),
        ] {
            let _ = writeln!(out, "\n{name}:");
            for row in data.chunks(cols) {
                let cells: Vec<String> = row
                    .iter()
                    .map(|z| format!("{:>9.6}{:+.6}i", z.re, z.im))
                    .collect();
                let _ = writeln!(out, "  {}", cells.join("  "));
            }
        }
        let _ = writeln!(out, "\n{}", if self.passed { "reference data reproduced" } else { "reference data MISMATCH" });
        out
    }
}
