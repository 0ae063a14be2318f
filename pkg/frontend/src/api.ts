// Thin client for the local annotation service.

import type { AnnotationDocument, ProjectJson, TaxonomyJson } from "./types";

export interface ApiError {
  code: string;
  message: string;
  annotationIndex: number | null;
}

export class ServiceError extends Error {
  constructor(public status: number, public body: ApiError | null) {
    super(body?.message ?? `service responded ${status}`);
  }
}

async function checkOk(response: Response): Promise<Response> {
  if (response.ok) return response;
  let body: ApiError | null = null;
  try {
    body = (await response.json()) as ApiError;
  } catch {
    // non-JSON error body
  }
  throw new ServiceError(response.status, body);
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  async getProject(): Promise<ProjectJson> {
    return (await checkOk(await fetch(`${this.baseUrl}/api/project`))).json();
  }

  async setCursor(index: number): Promise<void> {
    await checkOk(
      await fetch(`${this.baseUrl}/api/project/cursor`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ index }),
      })
    );
  }

  async getTaxonomy(): Promise<TaxonomyJson> {
    return (await checkOk(await fetch(`${this.baseUrl}/api/taxonomy`))).json();
  }

  imageUrl(index: number): string {
    return `${this.baseUrl}/api/images/${index}`;
  }

  async getAnnotations(index: number): Promise<AnnotationDocument> {
    return (
      await checkOk(await fetch(`${this.baseUrl}/api/images/${index}/annotations`))
    ).json();
  }

  async putAnnotations(index: number, doc: AnnotationDocument): Promise<void> {
    await checkOk(
      await fetch(`${this.baseUrl}/api/images/${index}/annotations`, {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(doc),
      })
    );
  }
}
