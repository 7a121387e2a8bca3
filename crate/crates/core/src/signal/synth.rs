//! Deterministic synthetic test signals standing in for real recordings.

use super::{AudioBuffer, SignalError, NYQUIST, SAMPLE_RATE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Relative amplitudes of the fundamental and three decaying overtones used
/// by [`synth_chord`].
const PARTIAL_AMPS: [f64; 4] = [1.0, 0.5, 1.0 / 3.0, 0.25];

pub fn midi_to_hz(note: f64) -> f64 {
    440.0 * ((note - 69.0) / 12.0).exp2()
}

fn check_duration(dur: f64) -> Result<usize, SignalError> {
    if dur <= 0.0 {
        return Err(SignalError::NonPositiveDuration(dur));
    }
    Ok((dur * SAMPLE_RATE as f64).round() as usize)
}

/// Pure sine at `freq` Hz with linear gain `amp`.
pub fn synth_tone(freq: f64, dur: f64, amp: f64) -> Result<AudioBuffer, SignalError> {
    let n = check_duration(dur)?;
    if freq >= NYQUIST {
        return Err(SignalError::FrequencyAboveNyquist(freq));
    }
    let w = 2.0 * PI * freq / SAMPLE_RATE as f64;
    let samples = (0..n).map(|i| amp * (w * i as f64).sin()).collect();
    Ok(AudioBuffer::new(samples, SAMPLE_RATE))
}

/// Seeded uniform noise in [-1, 1); identical arguments give identical output.
pub fn synth_noise(dur: f64, seed: u64) -> Result<AudioBuffer, SignalError> {
    let n = check_duration(dur)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Ok(AudioBuffer::new(samples, SAMPLE_RATE))
}

/// Unit impulses at t = 0, period, 2*period, ...
pub fn synth_clicks(period: f64, dur: f64) -> Result<AudioBuffer, SignalError> {
    let n = check_duration(dur)?;
    if period <= 0.0 {
        return Err(SignalError::NonPositiveDuration(period));
    }
    let mut samples = vec![0.0; n];
    let step = period * SAMPLE_RATE as f64;
    let mut k = 0u64;
    loop {
        let idx = (k as f64 * step).round() as usize;
        if idx >= n {
            break;
        }
        samples[idx] = 1.0;
        k += 1;
    }
    Ok(AudioBuffer::new(samples, SAMPLE_RATE))
}

/// Sum of harmonically rich tones, one per MIDI pitch: fundamental plus three
/// decaying overtones each, peak-normalized to 0.9.
pub fn synth_chord(pitches: &[f64], dur: f64) -> Result<AudioBuffer, SignalError> {
    let n = check_duration(dur)?;
    if pitches.is_empty() {
        return Err(SignalError::EmptyPitchList);
    }
    for &p in pitches {
        if midi_to_hz(p) >= NYQUIST {
            return Err(SignalError::FrequencyAboveNyquist(midi_to_hz(p)));
        }
    }
    let mut samples = vec![0.0; n];
    for &p in pitches {
        let f0 = midi_to_hz(p);
        for (h, &amp) in PARTIAL_AMPS.iter().enumerate() {
            let f = f0 * (h + 1) as f64;
            if f >= NYQUIST {
                continue;
            }
            let w = 2.0 * PI * f / SAMPLE_RATE as f64;
            for (i, s) in samples.iter_mut().enumerate() {
                *s += amp * (w * i as f64).sin();
            }
        }
    }
    let peak = samples.iter().fold(0.0f64, |m, &s| m.max(s.abs()));
    if peak > 0.0 {
        let g = 0.9 / peak;
        for s in &mut samples {
            *s *= g;
        }
    }
    Ok(AudioBuffer::new(samples, SAMPLE_RATE))
}
