/** Session state mirrors the service: parser parameters come from /config,
 * the scratch list from /workspace/scratch. Reloading a page rebuilds the
 * whole state from those two calls; nothing lives only in the client.
 */

import { ApiClient } from "./api";
import { PipelineConfigJson, TreeViewNode } from "./types";

export interface SessionState {
  parameters: PipelineConfigJson;
  scratch: Record<string, TreeViewNode>;
}

export async function loadSession(api: ApiClient): Promise<SessionState> {
  const [parameters, scratch] = await Promise.all([api.getConfig(), api.scratchList()]);
  return { parameters, scratch };
}

export async function updateParameters(
  api: ApiClient,
  session: SessionState,
  partial: Partial<PipelineConfigJson>
): Promise<SessionState> {
  const parameters = await api.putConfig(partial);
  return { ...session, parameters };
}
