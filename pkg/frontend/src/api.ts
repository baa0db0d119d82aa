// Typed client for the documented wire protocol (docs/wire.md).
// Every request the UI makes goes through this module, so the contract
// test can assert that only documented endpoints are ever called.

export type TypedValue = { t: string; v: unknown };

export type Session = {
  token: string;
  actorId: string;
  roles: string[];
  expiresAt: number;
};

export type FormField = { name: string; label: string; type: string };

export type Task = {
  taskInstanceId: string;
  instanceId: string;
  nodeName: string;
  taskName: string;
  actorId: string;
  state: string;
  createdAt: string;
  transitions: (string | null)[];
  formFields: FormField[];
  variables: Record<string, TypedValue>;
};

export type Definition = { definitionId: string; name: string; version: number };

export type Instance = {
  instanceId: string;
  state: string;
  currentNodes: string[];
  variables: Record<string, TypedValue>;
};

export type GraphNode = {
  name: string;
  kind: string;
  x: number;
  y: number;
  w: number;
  h: number;
};

export type GraphEdge = { from: string; to: string; name: string | null };

export type GraphState = {
  nodes: GraphNode[];
  transitions: GraphEdge[];
  currentNodes: string[];
};

export type StagingRef = { name: string; url: string; size: number; mimeType: string };

export type SearchRow = Record<string, unknown> & { pid: string; label: string };

export type Violation = { code: string; subject: string; message: string };

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail?: unknown,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Api {
  private token: string | null = null;
  session: Session | null = null;

  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(method: string, path: string, init: RequestInit = {}): Promise<Response> {
    const headers = new Headers(init.headers);
    if (this.token) headers.set('Authorization', `Bearer ${this.token}`);
    const response = await this.fetchImpl(this.baseUrl + path, { ...init, method, headers });
    if (!response.ok) {
      let body: { code?: string; message?: string; detail?: unknown } = {};
      try {
        body = await response.json();
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(
        response.status,
        body.code ?? 'HTTP_ERROR',
        body.message ?? response.statusText,
        body.detail,
      );
    }
    return response;
  }

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = {};
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { 'Content-Type': 'application/json' };
    }
    return (await this.request(method, path, init)).json() as Promise<T>;
  }

  async login(username: string, password: string): Promise<Session> {
    const session = await this.json<Session>('POST', '/auth/login', { username, password });
    this.token = session.token;
    this.session = session;
    return session;
  }

  listTasks(): Promise<{ tasks: Task[] }> {
    return this.json('GET', '/api/tasks');
  }

  latestDefinitions(): Promise<{ definitions: Definition[] }> {
    return this.json('GET', '/api/definitions/latest');
  }

  async deployArchive(file: File): Promise<Definition> {
    const form = new FormData();
    form.append('archive', file);
    return (await this.request('POST', '/api/definitions', { body: form })).json();
  }

  startProcess(definitionId: string): Promise<{ instanceId: string; task: Task }> {
    return this.json('POST', `/api/processes/${definitionId}/start`);
  }

  completeTask(
    taskId: string,
    transition: string | null,
    variables: Record<string, TypedValue>,
  ): Promise<Instance> {
    return this.json('POST', `/api/tasks/${taskId}/complete`, { transition, variables });
  }

  administer(instanceId: string, action: 'advance' | 'stop'): Promise<Instance> {
    return this.json('POST', `/api/instances/${instanceId}/admin`, { action });
  }

  instanceGraph(instanceId: string): Promise<GraphState> {
    return this.json('GET', `/api/instances/${instanceId}/graph`);
  }

  async uploadStaging(file: File): Promise<StagingRef> {
    const form = new FormData();
    form.append('file', file);
    return (await this.request('POST', '/staging', { body: form })).json();
  }

  search(
    conditions: [string, string, string][],
    maxResults = 100,
  ): Promise<{ rows: SearchRow[]; complete: boolean }> {
    return this.json('POST', '/repo/search', { conditions, maxResults });
  }

  // Saves an uploaded article on the object: add on first save, modify
  // afterwards (judged by whether the ARTICLE datastream answers 404).
  async saveArticle(pid: string, staged: StagingRef, creatorName: string): Promise<number> {
    let exists = true;
    try {
      await this.request('GET', `/repo/objects/${pid}/datastreams/ARTICLE`);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) exists = false;
      else throw error;
    }
    const body = {
      mode: 'byReference',
      location: staged.url,
      mimeType: staged.mimeType,
      formatURI: creatorName,
      dsLabel: 'ARTICLE',
      logMessage: 'article upload',
    };
    const result = await this.json<{ versionNo: number }>(
      exists ? 'PUT' : 'POST',
      `/repo/objects/${pid}/datastreams/ARTICLE`,
      body,
    );
    return result.versionNo;
  }

  datastreamUrl(pid: string, dsId: string): string {
    return `${this.baseUrl}/repo/objects/${pid}/datastreams/${dsId}`;
  }
}
