"""35-d acoustic features for camera synthesis, frame-aligned to the dance fps.

Per frame the vector is: onset envelope strength (1), MFCCs (20), chroma (12),
beat indicator (1), onset-peak indicator (1). Extraction is plain numpy/scipy:
a hann-window STFT with one analysis frame per animation frame, a 64-band HTK
mel bank, DCT-II cepstra, pitch-class-binned chroma, spectral-flux onsets, and
an autocorrelation tempo estimate with a best-phase beat comb.

Digital silence maps to an all-zero feature matrix.
"""

from __future__ import annotations

import numpy as np
import scipy.fft
import scipy.io.wavfile
import scipy.signal

from tweencam.core import DEFAULT_FPS, MUSIC_DIM

N_FFT = 1024
N_MELS = 64
N_MFCC = 20
N_CHROMA = 12
_EPS = 1e-10
#: lowest frequency binned into chroma (just below A0)
_CHROMA_FMIN = 27.0
_BPM_RANGE = (50.0, 240.0)


def load_wav(path) -> tuple[np.ndarray, int]:
    """Read a WAV file as a mono float64 waveform in [-1, 1] plus sample rate."""
    sr, data = scipy.io.wavfile.read(path)
    y = np.asarray(data, dtype=np.float64)
    if y.ndim == 2:
        y = y.mean(axis=1)
    if data.dtype == np.int16:
        y /= 32768.0
    elif data.dtype == np.int32:
        y /= 2147483648.0
    elif data.dtype == np.uint8:
        y = (y - 128.0) / 128.0
    return y, int(sr)


def _frame_signal(y: np.ndarray, sr: int, fps: int, n_frames: int) -> np.ndarray:
    """Slice one centered n_fft window per output frame, zero-padded at edges."""
    half = N_FFT // 2
    padded = np.concatenate([np.zeros(half), y, np.zeros(N_FFT)])
    frames = np.empty((n_frames, N_FFT))
    for i in range(n_frames):
        center = int(round(i * sr / fps))
        frames[i] = padded[center : center + N_FFT]
    return frames


def _mel_bank(sr: int) -> np.ndarray:
    def to_mel(f):
        return 2595.0 * np.log10(1.0 + np.asarray(f) / 700.0)

    def from_mel(m):
        return 700.0 * (10.0 ** (np.asarray(m) / 2595.0) - 1.0)

    edges = from_mel(np.linspace(to_mel(0.0), to_mel(sr / 2.0), N_MELS + 2))
    freqs = np.fft.rfftfreq(N_FFT, d=1.0 / sr)
    bank = np.zeros((N_MELS, len(freqs)))
    for m in range(N_MELS):
        lo, mid, hi = edges[m], edges[m + 1], edges[m + 2]
        up = (freqs - lo) / max(mid - lo, _EPS)
        down = (hi - freqs) / max(hi - mid, _EPS)
        bank[m] = np.clip(np.minimum(up, down), 0.0, None)
    return bank


def _chroma_map(sr: int) -> np.ndarray:
    """12 x n_bins matrix folding spectral power onto pitch classes (A = 9)."""
    freqs = np.fft.rfftfreq(N_FFT, d=1.0 / sr)
    cmap = np.zeros((N_CHROMA, len(freqs)))
    valid = freqs >= _CHROMA_FMIN
    midi = 69.0 + 12.0 * np.log2(freqs[valid] / 440.0)
    pc = np.round(midi).astype(int) % 12
    cmap[pc, np.flatnonzero(valid)] = 1.0
    return cmap


def _onset_envelope(log_mel: np.ndarray) -> np.ndarray:
    """Half-wave-rectified log-mel flux, max-normalized; frame 0 is zero."""
    env = np.zeros(log_mel.shape[0])
    if log_mel.shape[0] > 1:
        flux = np.maximum(log_mel[1:] - log_mel[:-1], 0.0)
        env[1:] = flux.mean(axis=1)
    peak = env.max()
    if peak > 0:
        env = env / peak
    return env


def _beat_track(env: np.ndarray, fps: int) -> np.ndarray:
    """Place beats on a fixed grid: autocorrelation tempo, best-phase comb."""
    beats = np.zeros(len(env))
    if env.max() <= 0 or len(env) < 4:
        return beats
    lo = max(2, int(np.floor(fps * 60.0 / _BPM_RANGE[1])))
    hi = min(len(env) - 1, int(np.ceil(fps * 60.0 / _BPM_RANGE[0])))
    if hi < lo:
        return beats
    centered = env - env.mean()
    acorr = np.correlate(centered, centered, mode="full")[len(env) - 1 :]
    lag = lo + int(np.argmax(acorr[lo : hi + 1]))
    phases = [env[p::lag].sum() for p in range(lag)]
    phase = int(np.argmax(phases))
    beats[phase::lag] = 1.0
    return beats


def extract_music_features(y, sr: int, fps: int = DEFAULT_FPS) -> np.ndarray:
    """Compute the (T, 35) float32 feature matrix for a mono waveform.

    T = round(duration * fps); silence yields zeros of that shape.
    """
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if sr <= 0:
        raise ValueError(f"sample rate must be positive, got {sr}")
    n_frames = max(1, int(round(len(y) * fps / sr)))
    out = np.zeros((n_frames, MUSIC_DIM), dtype=np.float32)
    if len(y) == 0 or np.max(np.abs(y)) == 0.0:
        return out

    frames = _frame_signal(y, sr, fps, n_frames)
    window = scipy.signal.get_window("hann", N_FFT, fftbins=True)
    spectrum = np.abs(np.fft.rfft(frames * window, axis=1))
    power = spectrum**2

    mel = power @ _mel_bank(sr).T
    log_mel = np.log(mel + _EPS)
    mfcc = scipy.fft.dct(log_mel, type=2, norm="ortho", axis=1)[:, :N_MFCC]

    chroma = power @ _chroma_map(sr).T
    peak_per_frame = chroma.max(axis=1, keepdims=True)
    chroma = np.where(peak_per_frame > 0, chroma / np.maximum(peak_per_frame, _EPS), 0.0)

    env = _onset_envelope(log_mel)
    peaks = np.zeros(n_frames)
    if env.max() > 0:
        idx, _ = scipy.signal.find_peaks(env, prominence=0.1)
        peaks[idx] = 1.0
    beats = _beat_track(env, fps)

    out[:, 0] = env
    out[:, 1 : 1 + N_MFCC] = mfcc
    out[:, 1 + N_MFCC : 1 + N_MFCC + N_CHROMA] = chroma
    out[:, 33] = beats
    out[:, 34] = peaks
    return out
