use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, max_abs_diff, CMatrix, DensityOperator, KrausChannel};
use crate::mbqc::build_cluster;
use crate::protocol::{
    computation_channel, noverify_client_channel, verify_system_channel, BobImplementation, ClientProgram, DeviceBehavior,
    Variant, VerificationFlag,
};
use serde::{Deserialize, Serialize};

/// One protocol instance: variant, qubits sent, Alice's program and her device.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub variant: Variant,
    pub n: usize,
    pub program: ClientProgram,
    pub device: DeviceBehavior,
}

impl SystemSpec {
    pub fn new(variant: Variant, n: usize, program: ClientProgram, device: DeviceBehavior) -> Result<Self> {
        let expected = match variant {
            Variant::Noverify => n,
            Variant::Verify => {
                if n == 0 || n % 3 != 0 {
                    return Err(Error::Config(format!("the verified protocol needs N divisible by 3, got {n}")));
                }
                n / 3
            }
        };
        if program.n_resource() != expected {
            return Err(Error::Config(format!(
                "program uses {} resource qubits, N = {n} provides {expected}",
                program.n_resource()
            )));
        }
        device.scripted_output(program.output_dim())?;
        Ok(Self { variant, n, program, device })
    }

    pub fn with_device(&self, device: DeviceBehavior) -> Result<Self> {
        Self::new(self.variant, self.n, self.program.clone(), device)
    }

    pub fn honest_bob(&self) -> BobImplementation {
        BobImplementation::Honest { graph: self.program.resource.clone() }
    }

    /// Dimension of everything entering Alice's side: her input, plus the
    /// received register when Bob's port is left open.
    pub fn input_dim(&self, port: AdversaryPort<'_>) -> usize {
        match port {
            AdversaryPort::Open => self.program.input_dim() << self.program.n_resource(),
            AdversaryPort::Strategy(_) => self.program.input_dim(),
        }
    }

    /// Output dimension, including the verdict qubit in the verified variant.
    pub fn output_dim(&self) -> usize {
        match self.variant {
            Variant::Noverify => self.program.output_dim(),
            Variant::Verify => 2 * self.program.output_dim(),
        }
    }
}

/// What sits on Bob's interface.
#[derive(Clone, Copy, Debug)]
pub enum AdversaryPort<'a> {
    /// The interface is left to the distinguisher: the received register is
    /// an input of the system.
    Open,
    /// Bob (honest or not) is plugged in.
    Strategy(&'a BobImplementation),
}

/// π_A R with Bob's interface as given.
pub fn build_real_system(spec: &SystemSpec, port: AdversaryPort<'_>) -> Result<KrausChannel> {
    match (spec.variant, port) {
        (Variant::Noverify, AdversaryPort::Open) => noverify_client_channel(&spec.program, &spec.device),
        (Variant::Noverify, AdversaryPort::Strategy(bob)) => {
            let honest = build_cluster(&spec.program.resource)?;
            bob.attach_channel(&honest, spec.program.input_dim())?.then(&noverify_client_channel(&spec.program, &spec.device)?)
        }
        (Variant::Verify, AdversaryPort::Open) => Err(open_verify_port()),
        (Variant::Verify, AdversaryPort::Strategy(bob)) => verify_system_channel(&spec.program, &spec.device, bob, spec.n),
    }
}

fn open_verify_port() -> Error {
    Error::Config("the verified system takes Bob as a strategy on the register, not as an open port".into())
}

/// The ideal resource S. It runs a copy of Alice's protocol internally; with
/// the switch off nothing can enter from the filtered interface.
#[derive(Clone, Debug)]
pub struct IdealFunctionality {
    spec: SystemSpec,
}

impl IdealFunctionality {
    pub fn new(spec: SystemSpec) -> Self {
        Self { spec }
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    /// f = 0: the internal copy of π_A gets the honest resource.
    pub fn switch_off(&self) -> Result<KrausChannel> {
        let spec = &self.spec;
        let program = spec.program.with_angle_offset(spec.device.angle_offset());
        let din = spec.program.input_dim();
        match spec.variant {
            Variant::Noverify => {
                if let Some(out) = spec.device.scripted_output(spec.program.output_dim())? {
                    return Ok(KrausChannel::replacement(din, &out.to_density()));
                }
                let honest = build_cluster(&spec.program.resource)?;
                KrausChannel::new(program.branch_operators(Some(&honest), spec.device.corrects())?)
            }
            Variant::Verify => {
                let inner = if let Some(out) = spec.device.scripted_output(spec.program.output_dim())? {
                    let e0 = VerificationFlag::ACCEPT.ket();
                    let flagged = out.to_density().matrix().kronecker(&(&e0 * e0.adjoint()));
                    KrausChannel::replacement(din, &DensityOperator::new(flagged)?)
                } else {
                    let flag = VerificationFlag(u8::from(spec.device.flips_flag())).ket();
                    let ch = computation_channel(&spec.program, &spec.device, 0, 0)?;
                    KrausChannel::new(ch.kraus().iter().map(|k| k.kronecker(&flag)).collect())?
                };
                self.finish_verify(inner)
            }
        }
    }

    /// f = 1: whatever arrives on the filtered interface replaces the honest
    /// resource inside the copy of π_A.
    pub fn switch_on(&self, port: AdversaryPort<'_>) -> Result<KrausChannel> {
        let spec = &self.spec;
        match (spec.variant, port) {
            (Variant::Noverify, AdversaryPort::Open) => {
                if let Some(out) = spec.device.scripted_output(spec.program.output_dim())? {
                    return Ok(KrausChannel::replacement(spec.input_dim(port), &out.to_density()));
                }
                let program = spec.program.with_angle_offset(spec.device.angle_offset());
                KrausChannel::new(program.branch_operators(None, spec.device.corrects())?)
            }
            (Variant::Noverify, AdversaryPort::Strategy(bob)) => {
                let honest = build_cluster(&spec.program.resource)?;
                bob.attach_channel(&honest, spec.program.input_dim())?.then(&self.switch_on(AdversaryPort::Open)?)
            }
            (Variant::Verify, AdversaryPort::Open) => Err(open_verify_port()),
            (Variant::Verify, AdversaryPort::Strategy(bob)) => {
                self.finish_verify(verify_system_channel(&spec.program, &spec.device, bob, spec.n)?)
            }
        }
    }

    /// With the honest device, an accepted run outputs U ρ_in U† in place of
    /// whatever the internal copy produced; rejected runs and any other
    /// device are forwarded unchanged.
    fn finish_verify(&self, inner: KrausChannel) -> Result<KrausChannel> {
        if !self.spec.device.is_honest() {
            return Ok(inner);
        }
        let v = self.spec.program.target_operator()?;
        accept_branch_replaced(&inner, &v)
    }
}

/// Splits a Kraus operator with the verdict as its last output qubit into
/// the blocks for e = 0 and e = 1.
pub(crate) fn flag_blocks(k: &CMatrix) -> (CMatrix, CMatrix) {
    let dout = k.nrows() / 2;
    let pick = |e: usize| CMatrix::from_fn(dout, k.ncols(), |o, i| k[(2 * o + e, i)]);
    (pick(0), pick(1))
}

/// ρ ↦ Σ K₁ ρ K₁† ⊗ |1⟩⟨1| + Pr[e=0] · V ρ V† ⊗ |0⟩⟨0|. Only linear when
/// Pr[e=0] does not depend on ρ; anything else is reported.
pub fn accept_branch_replaced(inner: &KrausChannel, v: &CMatrix) -> Result<KrausChannel> {
    let din = inner.dim_in();
    if v.ncols() != din || 2 * v.nrows() != inner.dim_out() {
        return Err(Error::DimensionMismatch("target isometry does not match the system".into()));
    }
    let mut m0 = CMatrix::zeros(din, din);
    let e0 = VerificationFlag::ACCEPT.ket();
    let e1 = VerificationFlag::REJECT.ket();
    let mut kraus = Vec::new();
    for k in inner.kraus() {
        let (k0, k1) = flag_blocks(k);
        m0 += k0.adjoint() * &k0;
        if k1.iter().any(|x| x.norm() > 0.0) {
            kraus.push(k1.kronecker(&e1));
        }
    }
    let p0 = m0.trace().re / din as f64;
    if max_abs_diff(&m0, &CMatrix::identity(din, din).scale(p0)) > 1e-9 {
        let (vals, _) = hermitian_eigen(&m0);
        return Err(Error::Decomposition(format!(
            "acceptance probability depends on the input (ranges over {:.3e}..{:.3e})",
            vals.first().copied().unwrap_or(0.0),
            vals.last().copied().unwrap_or(0.0)
        )));
    }
    if p0 > 0.0 {
        kraus.push(v.kronecker(&e0).scale(p0.clamp(0.0, 1.0).sqrt()));
    }
    KrausChannel::new(kraus)
}

/// The simulator: sets f = 1 and forwards what Bob's interface provides.
#[derive(Clone, Copy, Debug, Default)]
pub struct SimulatorSigma;

impl SimulatorSigma {
    pub fn attach(&self, s: &IdealFunctionality, port: AdversaryPort<'_>) -> Result<KrausChannel> {
        s.switch_on(port)
    }
}

/// How the ideal system is wired on the adversary's side.
#[derive(Clone, Copy, Debug)]
pub enum IdealMode<'a> {
    /// S with f = 0; the filtered interface does not exist.
    SwitchOff,
    /// Sσ: the simulator forwards `port`.
    Simulated { sigma: &'a SimulatorSigma, port: AdversaryPort<'a> },
}

pub fn build_ideal_system(s: &IdealFunctionality, mode: IdealMode<'_>) -> Result<KrausChannel> {
    match mode {
        IdealMode::SwitchOff => s.switch_off(),
        IdealMode::Simulated { sigma, port } => sigma.attach(s, port),
    }
}

/// Σ (I_ref ⊗ K) ρ (I_ref ⊗ K)† with the reference system first, without
/// building the enlarged channel.
pub fn apply_with_reference(ch: &KrausChannel, rho: &CMatrix, ref_dim: usize) -> Result<CMatrix> {
    let (din, dout) = (ch.dim_in(), ch.dim_out());
    if rho.nrows() != ref_dim * din || !rho.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} does not split as {ref_dim} x {din}",
            rho.nrows()
        )));
    }
    let mut out = CMatrix::zeros(ref_dim * dout, ref_dim * dout);
    for a in 0..ref_dim {
        for b in 0..ref_dim {
            let block = rho.view((a * din, b * din), (din, din));
            let mut acc = CMatrix::zeros(dout, dout);
            for k in ch.kraus() {
                acc += k * block * k.adjoint();
            }
            out.view_mut((a * dout, b * dout), (dout, dout)).copy_from(&acc);
        }
    }
    Ok(out)
}
