/** Undo/redo for session edits. Every command is a pair of service calls:
 * the forward edit and its inverse. Undoing a first-time pose edit clears
 * the override (the model takes the frame back) rather than re-posting a
 * stale value, so undo always restores the true pre-edit state. */

import type { MutationResponse, Policy, Pose } from "./types";
import { clonePose } from "./types";

export interface EditBackend {
  tagOp(
    sid: string,
    op: { op: "add" | "remove" | "move"; frame: number; to?: number; policy?: Policy },
  ): Promise<MutationResponse>;
  setPose(
    sid: string,
    frame: number,
    pose: Pose,
    version?: number,
    policy?: Policy,
  ): Promise<MutationResponse>;
  clearPose(
    sid: string,
    frame: number,
    version?: number,
    policy?: Policy,
  ): Promise<MutationResponse>;
}

export interface EditCommand {
  label: string;
  redo(): Promise<MutationResponse>;
  undo(): Promise<MutationResponse>;
}

export class UndoStack {
  private undos: EditCommand[] = [];
  private redos: EditCommand[] = [];

  /** Record a command whose forward edit has already been applied. */
  push(cmd: EditCommand): void {
    this.undos.push(cmd);
    this.redos = [];
  }

  get canUndo(): boolean {
    return this.undos.length > 0;
  }

  get canRedo(): boolean {
    return this.redos.length > 0;
  }

  async undo(): Promise<MutationResponse | null> {
    const cmd = this.undos.pop();
    if (!cmd) return null;
    try {
      const resp = await cmd.undo();
      this.redos.push(cmd);
      return resp;
    } catch (err) {
      this.undos.push(cmd);
      throw err;
    }
  }

  async redo(): Promise<MutationResponse | null> {
    const cmd = this.redos.pop();
    if (!cmd) return null;
    try {
      const resp = await cmd.redo();
      this.undos.push(cmd);
      return resp;
    } catch (err) {
      this.redos.push(cmd);
      throw err;
    }
  }

  clear(): void {
    this.undos = [];
    this.redos = [];
  }
}

/** `prior` is the override previously pinned at `frame`, or null if the
 * frame was model-owned before this edit. */
export function poseEditCommand(
  backend: EditBackend,
  sid: string,
  frame: number,
  next: Pose,
  prior: Pose | null,
): EditCommand {
  const nextCopy = clonePose(next);
  const priorCopy = prior === null ? null : clonePose(prior);
  return {
    label: `pose @ ${frame}`,
    redo: () => backend.setPose(sid, frame, nextCopy),
    undo: () =>
      priorCopy === null
        ? backend.clearPose(sid, frame)
        : backend.setPose(sid, frame, priorCopy),
  };
}

export function addTagCommand(backend: EditBackend, sid: string, frame: number): EditCommand {
  return {
    label: `add @ ${frame}`,
    redo: () => backend.tagOp(sid, { op: "add", frame }),
    undo: () => backend.tagOp(sid, { op: "remove", frame }),
  };
}

/** `droppedOverride` is the pose pin removed together with the tag, if any;
 * undo restores both. */
export function removeTagCommand(
  backend: EditBackend,
  sid: string,
  frame: number,
  droppedOverride: Pose | null,
): EditCommand {
  const dropped = droppedOverride === null ? null : clonePose(droppedOverride);
  return {
    label: `remove @ ${frame}`,
    redo: () => backend.tagOp(sid, { op: "remove", frame }),
    undo: async () => {
      const resp = await backend.tagOp(sid, { op: "add", frame });
      if (dropped === null) return resp;
      return backend.setPose(sid, frame, dropped);
    },
  };
}

export function moveTagCommand(
  backend: EditBackend,
  sid: string,
  from: number,
  to: number,
  policy?: Policy,
): EditCommand {
  return {
    label: `move ${from} -> ${to}`,
    redo: () => backend.tagOp(sid, { op: "move", frame: from, to, policy }),
    undo: () => backend.tagOp(sid, { op: "move", frame: to, to: from, policy }),
  };
}
