package org.hibernate.envers.synchronization.work;

public interface WorkUnitMergeDispatcher {
    AuditWorkUnit dispatch(WorkUnitMergeVisitor first);
}
